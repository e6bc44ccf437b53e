#include "extmorph/extensivity.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace extmorph {

using nlohmann::json;

std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inapplicable: return "inapplicable";
  }
  return "?";
}

CheckStatus CheckStatus::fail(json witness, json stats) {
  return {Status::fail, std::move(witness), std::move(stats)};
}

CheckStatus CheckStatus::inapplicable(json witness, json stats) {
  return {Status::inapplicable, std::move(witness), std::move(stats)};
}

json to_json(const CheckStatus& s) {
  json j{{"status", to_string(s.status)}};
  if (s.status != Status::pass) j["witness"] = s.witness;
  if (!s.stats.empty()) j["stats"] = s.stats;
  return j;
}

namespace {

constexpr std::size_t witness_cap = 12;

// Words used in witnesses. Coextensive checks run the extensive code in the
// opposite category, where pullbacks are pushouts and rows trade places.
struct Vocab {
  const char* cond1;
  const char* cond2;
  const char* square;
  const char* sum;
  const char* domain_row;
  const char* codomain_row;
};
constexpr Vocab extensive_words{"E1", "E2", "pullback", "coproduct", "top_row", "bottom_row"};
constexpr Vocab coextensive_words{"C1", "C2", "pushout", "product", "bottom_row", "top_row"};

json names(const FinCategory& c, std::span<const MorphismId> ms) {
  json out = json::array();
  for (MorphismId m : ms) out.push_back(c.morphism_name(m));
  return out;
}

json decomposition(const FinCategory& c, const CospanDiagram& d) {
  json objs = json::array();
  for (ObjectId o : d.base.objects) objs.push_back(c.object_name(o));
  return {{"object", c.object_name(d.nadir)}, {"summands", objs}, {"legs", names(c, d.legs)}};
}

json decomposition(const FinCategory& c, const SpanDiagram& d) { return decomposition(c, as_cospan(d)); }

CheckStatus e1_impl(Analysis& a, MorphismId f, const Vocab& v) {
  const FinCategory& c = a.category();
  std::size_t bases = 0;
  for (const CospanDiagram& d : a.coproduct_decompositions(c.cod(f))) {
    ++bases;
    std::vector<MorphismId> row;
    for (MorphismId leg : d.legs) {
      auto pb = a.pullback(f, leg);
      if (!pb)
        return CheckStatus::fail({{"condition", v.cond1},
                                  {"reason", std::string("missing ") + v.square},
                                  {v.codomain_row, decomposition(c, d)},
                                  {"along", c.morphism_name(leg)}},
                                 {{"decompositions", bases}});
      row.push_back(pb->legs[0]);
    }
    if (!a.is_coproduct(row))
      return CheckStatus::fail({{"condition", v.cond1},
                                {"reason", std::string("pulled-back row is not a ") + v.sum},
                                {v.codomain_row, decomposition(c, d)},
                                {v.domain_row, names(c, row)}},
                               {{"decompositions", bases}});
  }
  return {Status::pass, {}, {{"decompositions", bases}}};
}

CheckStatus e2_impl(Analysis& a, MorphismId f, const Vocab& v) {
  const FinCategory& c = a.category();
  json failures = json::array();
  std::size_t diagrams = 0, failing = 0;
  for (const CospanDiagram& top : a.coproduct_decompositions(c.dom(f))) {
    for (const CospanDiagram& bottom : a.coproduct_decompositions(c.cod(f))) {
      // Candidate verticals for each square, and whether that square is a pullback.
      std::array<std::vector<std::pair<MorphismId, bool>>, 2> side;
      for (std::size_t k = 0; k < 2; ++k) {
        const MorphismId fa = c.compose(f, top.legs[k]);
        for (MorphismId g : c.hom(top.base.objects[k], bottom.base.objects[k]))
          if (c.compose(bottom.legs[k], g) == fa)
            side[k].emplace_back(g, a.is_pullback_square(top.legs[k], g, f, bottom.legs[k]));
      }
      if (side[0].empty() || side[1].empty()) continue;
      for (const auto& [g0, ok0] : side[0]) {
        for (const auto& [g1, ok1] : side[1]) {
          ++diagrams;
          if (ok0 && ok1) continue;
          ++failing;
          if (failures.size() >= witness_cap) continue;
          json bad = json::array();
          if (!ok0) bad.push_back("left");
          if (!ok1) bad.push_back("right");
          const MorphismId vert[3] = {g0, f, g1};
          failures.push_back({{v.domain_row, names(c, top.legs)},
                              {v.codomain_row, names(c, bottom.legs)},
                              {"verticals", names(c, vert)},
                              {"failing_squares", bad}});
        }
      }
    }
  }
  json stats{{"diagrams", diagrams}, {"failing", failing}};
  if (failing == 0) return {Status::pass, {}, stats};
  return CheckStatus::fail(
      {{"condition", v.cond2}, {"reason", std::string("square is not a ") + v.square}, {"diagrams", failures}},
      stats);
}

CheckStatus both(Analysis& a, MorphismId f, const Vocab& v) {
  CheckStatus s1 = e1_impl(a, f, v);
  CheckStatus s2 = e2_impl(a, f, v);
  CheckStatus out;
  out.stats = {{v.cond1, s1.stats}, {v.cond2, s2.stats}};
  if (s1.failed() || s2.failed()) {
    out.status = Status::fail;
    out.witness = json::object();
    if (s1.failed()) out.witness[v.cond1] = s1.witness;
    if (s2.failed()) out.witness[v.cond2] = s2.witness;
  }
  return out;
}

CheckStatus disjointness_impl(Analysis& a, const char* initial_word, const char* sum_word) {
  const FinCategory& c = a.category();
  auto init = a.initial();
  if (!init) return CheckStatus::inapplicable({{"missing", std::string(initial_word) + " object"}});
  const ObjectId zero = init->nadir;
  std::size_t checked = 0;
  for (ObjectId x : c.objects()) {
    for (const CospanDiagram& d : a.coproduct_decompositions(x)) {
      ++checked;
      const MorphismId i1 = d.legs[0], i2 = d.legs[1];
      const ObjectId x1 = d.base.objects[0], x2 = d.base.objects[1];
      const MorphismId id1 = c.identity(x1);
      if (!a.is_pullback_square(id1, id1, i1, i1))
        return CheckStatus::fail({{"reason", "injection is not mono"},
                                  {sum_word, decomposition(c, d)},
                                  {"injection", c.morphism_name(i1)}},
                                 {{"decompositions", checked}});
      const MorphismId b1 = c.hom(zero, x1)[0], b2 = c.hom(zero, x2)[0];
      if (!a.is_pullback_square(b1, b2, i1, i2))
        return CheckStatus::fail({{"reason", std::string("injections do not meet in the ") + initial_word},
                                  {sum_word, decomposition(c, d)}},
                                 {{"decompositions", checked}});
    }
  }
  return {Status::pass, {}, {{"decompositions", checked}}};
}

}  // namespace

CheckStatus check_e1(Analysis& a, MorphismId f) { return e1_impl(a, f, extensive_words); }
CheckStatus check_e2(Analysis& a, MorphismId f) { return e2_impl(a, f, extensive_words); }
CheckStatus is_extensive_morphism(Analysis& a, MorphismId f) { return both(a, f, extensive_words); }
CheckStatus check_c1(Analysis& a, MorphismId f) { return e1_impl(a.opposite(), f, coextensive_words); }
CheckStatus check_c2(Analysis& a, MorphismId f) { return e2_impl(a.opposite(), f, coextensive_words); }
CheckStatus is_coextensive_morphism(Analysis& a, MorphismId f) { return both(a.opposite(), f, coextensive_words); }

CheckStatus is_extensive_morphism(const FinCategory& c, MorphismId f) {
  Analysis a(c);
  return is_extensive_morphism(a, f);
}

CheckStatus is_coextensive_morphism(const FinCategory& c, MorphismId f) {
  Analysis a(c);
  return is_coextensive_morphism(a, f);
}

CheckStatus coproduct_disjointness(Analysis& a) { return disjointness_impl(a, "initial", "coproduct"); }
CheckStatus product_codisjointness(Analysis& a) { return disjointness_impl(a.opposite(), "terminal", "product"); }

CheckStatus complement_uniqueness(Analysis& a) {
  const FinCategory& c = a.category();
  if (!a.has_initial()) return CheckStatus::inapplicable({{"missing", "initial object"}});
  CheckStatus disjoint = coproduct_disjointness(a);
  if (!disjoint.passed())
    return CheckStatus::inapplicable({{"missing", "disjoint coproducts"}, {"detail", disjoint.witness}});
  std::size_t pairs = 0;
  for (ObjectId x : c.objects()) {
    const auto& ds = a.coproduct_decompositions(x);
    for (const CospanDiagram& d : ds) {
      for (const CospanDiagram& e : ds) {
        if (d.legs[0] != e.legs[0]) continue;
        ++pairs;
        const MorphismId j = d.legs[1], j2 = e.legs[1];
        bool found = false;
        for (MorphismId s : c.hom(d.base.objects[1], e.base.objects[1]))
          if (c.compose(j2, s) == j && a.is_iso(s)) {
            found = true;
            break;
          }
        if (!found)
          return CheckStatus::fail({{"reason", "complements are not isomorphic over the object"},
                                    {"first", decomposition(c, d)},
                                    {"second", decomposition(c, e)}},
                                   {{"pairs", pairs}});
      }
    }
  }
  return {Status::pass, {}, {{"pairs", pairs}}};
}

CheckStatus is_boolean_category(Analysis& a) {
  const FinCategory& c = a.category();
  if (!a.has_initial()) return CheckStatus::inapplicable({{"missing", "initial object"}});
  std::size_t missing = 0;
  for (ObjectId x : c.objects())
    for (ObjectId y : c.objects())
      if (x.value <= y.value && !a.coproduct(x, y)) ++missing;
  json stats{{"missing_binary_coproducts", missing}};
  json clauses = json::object();

  // Inclusions pull back along every morphism to inclusions.
  for (ObjectId x : c.objects()) {
    if (clauses.contains("stable")) break;
    for (const CospanDiagram& d : a.coproduct_decompositions(x)) {
      if (clauses.contains("stable")) break;
      for (MorphismId i : d.legs) {
        if (clauses.contains("stable")) break;
        for (ObjectId y : c.objects()) {
          if (clauses.contains("stable")) break;
          for (MorphismId f : c.hom(y, x)) {
            auto pb = a.pullback(f, i);
            if (!pb) {
              clauses["stable"] = {{"reason", "missing pullback of an inclusion"},
                                   {"inclusion", c.morphism_name(i)},
                                   {"along", c.morphism_name(f)}};
              break;
            }
            if (!a.is_coproduct_inclusion(pb->legs[0])) {
              clauses["stable"] = {{"reason", "pulled-back inclusion is not an inclusion"},
                                   {"inclusion", c.morphism_name(i)},
                                   {"along", c.morphism_name(f)},
                                   {"pulled_back", c.morphism_name(pb->legs[0])}};
              break;
            }
          }
        }
      }
    }
  }

  // Every inclusion satisfies the first extensivity condition.
  for (MorphismId i : c.morphisms()) {
    if (!a.is_coproduct_inclusion(i)) continue;
    CheckStatus e1 = check_e1(a, i);
    if (e1.failed()) {
      clauses["inclusions_extensive"] = {{"inclusion", c.morphism_name(i)}, {"detail", e1.witness}};
      break;
    }
  }

  // A coproduct with equal injections lives on an initial object.
  for (ObjectId x : c.objects()) {
    bool bad = false;
    for (const CospanDiagram& d : a.coproduct_decompositions(x))
      if (d.legs[0] == d.legs[1] && !a.is_universal(CospanDiagram{discrete_base({}), x, {}})) {
        clauses["equal_injections"] = {{"reason", "equal injections into a non-initial object"},
                                       {"coproduct", decomposition(c, d)}};
        bad = true;
        break;
      }
    if (bad) break;
  }

  if (clauses.empty()) return {Status::pass, {}, stats};
  return CheckStatus::fail(clauses, stats);
}

std::string_view to_string(ReportMode m) { return m == ReportMode::extensive ? "extensive" : "coextensive"; }

namespace {

CheckStatus aggregate(const FinCategory& c, const std::vector<std::pair<MorphismId, CheckStatus>>& rows,
                      const char* what) {
  std::size_t fails = 0;
  json failing = json::array();
  for (const auto& [m, s] : rows)
    if (s.failed()) {
      ++fails;
      if (failing.size() < witness_cap) failing.push_back(c.morphism_name(m));
    }
  json stats{{"checked", rows.size()}, {"failing", fails}};
  if (fails == 0) return {Status::pass, {}, stats};
  return CheckStatus::fail({{"reason", std::string("some ") + what + " morphism fails"}, {"morphisms", failing}}, stats);
}

}  // namespace

CategoryReport category_report(Analysis& a, ReportMode mode, std::optional<MorphismClass> restrict_to) {
  const FinCategory& c = a.category();
  const bool ext = mode == ReportMode::extensive;
  Analysis& ctx = ext ? a : a.opposite();
  const Vocab& v = ext ? extensive_words : coextensive_words;

  std::vector<std::optional<CheckStatus>> memo(c.morphism_count());
  auto status_of = [&](MorphismId f) -> const CheckStatus& {
    auto& slot = memo[f.index()];
    if (!slot) slot = both(ctx, f, v);
    return *slot;
  };

  CategoryReport r;
  r.mode = mode;
  for (MorphismId f : c.morphisms())
    if (!restrict_to || a.in_class(f, *restrict_to)) r.morphisms.emplace_back(f, status_of(f));
  r.verdict = aggregate(c, r.morphisms, "checked");

  // split epis and inclusions in ctx are split monos and projections of c in coextensive mode
  std::vector<std::pair<MorphismId, CheckStatus>> reduced_rows;
  for (MorphismId f : c.morphisms())
    if (ctx.profile(f).is_split_epi || ctx.is_coproduct_inclusion(f)) reduced_rows.emplace_back(f, status_of(f));
  r.reduced = aggregate(c, reduced_rows, ext ? "split epi or inclusion" : "split mono or projection");

  if (restrict_to) {
    r.agreement = CheckStatus::inapplicable({{"reason", "report restricted to a class"}});
  } else if (!ctx.has_binary_coproducts()) {
    r.agreement = CheckStatus::inapplicable({{"missing", ext ? "binary coproducts" : "binary products"}});
  } else if (r.verdict.status == r.reduced.status) {
    r.agreement = {Status::pass, {}, {}};
  } else {
    r.agreement = CheckStatus::fail({{"verdict", to_string(r.verdict.status)}, {"reduced", to_string(r.reduced.status)}});
  }
  return r;
}

json to_json(const FinCategory& c, const CategoryReport& r) {
  json rows = json::array();
  for (const auto& [m, s] : r.morphisms) {
    json row = to_json(s);
    row["morphism"] = c.morphism_name(m);
    rows.push_back(std::move(row));
  }
  return {{"mode", to_string(r.mode)},
          {"morphisms", rows},
          {"verdict", to_json(r.verdict)},
          {"reduced", to_json(r.reduced)},
          {"agreement", to_json(r.agreement)}};
}

namespace {

// Looks for a grid refining two product decompositions da (rows) and db (columns)
// of the same object. Each row is taken up to automorphisms of its factors, which
// the column projections absorb.
class GridSearch {
 public:
  GridSearch(Analysis& a, const SpanDiagram& da, const SpanDiagram& db) : a_(a), c_(a.category()), da_(da), db_(db) {}

  bool run() {
    rows_.assign(da_.legs.size(), nullptr);
    return pick_row(0);
  }

 private:
  bool pick_row(std::size_t i) {
    if (i == rows_.size()) return columns_ok();
    const ObjectId ai = c_.cod(da_.legs[i]);
    for (const SpanDiagram& row : a_.product_decompositions(ai, db_.legs.size())) {
      rows_[i] = &row;
      if (pick_row(i + 1)) return true;
    }
    return false;
  }

  bool columns_ok() {
    for (std::size_t j = 0; j < db_.legs.size(); ++j)
      if (!column_ok(j)) return false;
    return true;
  }

  // Column j: projections B_j -> C_ij, one per row, compatible with the rows,
  // that together form a product.
  bool column_ok(std::size_t j) {
    const std::size_t n = rows_.size();
    std::vector<std::vector<MorphismId>> cand(n);
    const ObjectId bj = c_.cod(db_.legs[j]);
    for (std::size_t i = 0; i < n; ++i) {
      const MorphismId through_row = c_.compose(rows_[i]->legs[j], da_.legs[i]);
      for (MorphismId beta : c_.hom(bj, c_.cod(rows_[i]->legs[j])))
        if (c_.compose(beta, db_.legs[j]) == through_row) cand[i].push_back(beta);
      if (cand[i].empty()) return false;
    }
    std::vector<MorphismId> pick(n);
    auto rec = [&](auto&& self, std::size_t i) -> bool {
      if (i == n) return a_.is_product(pick);
      for (MorphismId m : cand[i]) {
        pick[i] = m;
        if (self(self, i + 1)) return true;
      }
      return false;
    };
    return rec(rec, 0);
  }

  Analysis& a_;
  const FinCategory& c_;
  const SpanDiagram& da_;
  const SpanDiagram& db_;
  std::vector<const SpanDiagram*> rows_;
};

}  // namespace

CheckStatus has_finite_srp(Analysis& a, ObjectId x, int k) {
  if (k < 2) throw std::invalid_argument("refinement arity must be at least 2");
  const FinCategory& c = a.category();
  std::size_t pairs = 0;
  for (int m = 2; m <= k; ++m) {
    for (int n = 2; n <= k; ++n) {
      const auto& rows = a.product_decompositions(x, static_cast<std::size_t>(m));
      const auto& cols = a.product_decompositions(x, static_cast<std::size_t>(n));
      for (const SpanDiagram& da : rows)
        for (const SpanDiagram& db : cols) {
          ++pairs;
          if (!GridSearch(a, da, db).run())
            return CheckStatus::fail({{"reason", "no refining grid of products"},
                                      {"first", decomposition(c, da)},
                                      {"second", decomposition(c, db)}},
                                     {{"pairs", pairs}});
        }
    }
  }
  return {Status::pass, {}, {{"pairs", pairs}}};
}

CheckStatus has_binary_srp(Analysis& a, ObjectId x) { return has_finite_srp(a, x, 2); }

MorphismClassSpec class_spec(MorphismClass k) { return {std::string(to_string(k)), k}; }

CheckStatus is_m_extensive(Analysis& a, ObjectId x, const MorphismClassSpec& m, ClassPullback reading) {
  const FinCategory& c = a.category();
  auto in_m = [&](MorphismId g) { return a.in_class(g, m.predicate); };
  auto legs_ok = [&](MorphismId across, MorphismId parallel) {
    return in_m(parallel) && (reading == ClassPullback::parallel_leg || in_m(across));
  };
  std::vector<MorphismId> members;
  for (ObjectId y : c.objects())
    for (MorphismId g : c.hom(y, x))
      if (in_m(g)) members.push_back(g);
  json stats{{"class", m.name},
             {"reading", reading == ClassPullback::both_legs ? "both_legs" : "parallel_leg"},
             {"members", members.size()}};
  const auto& decomps = a.coproduct_decompositions(x);

  // Class pullbacks along inclusions exist.
  for (const CospanDiagram& d : decomps)
    for (MorphismId g : members)
      for (MorphismId leg : d.legs) {
        auto pb = a.pullback(g, leg);
        if (!pb || !legs_ok(pb->legs[0], pb->legs[1]))
          return CheckStatus::fail({{"clause", "existence"},
                                    {"reason", pb ? "pullback legs leave the class" : "missing pullback"},
                                    {"member", c.morphism_name(g)},
                                    {"inclusion", c.morphism_name(leg)}},
                                   stats);
      }

  std::size_t diagrams = 0;
  for (MorphismId g : members) {
    for (const CospanDiagram& bottom : decomps) {
      // Class pullbacks on both sides give a coproduct row.
      std::vector<MorphismId> row;
      for (MorphismId leg : bottom.legs) row.push_back(a.pullback(g, leg)->legs[0]);
      if (!a.is_coproduct(row))
        return CheckStatus::fail({{"clause", "pullbacks give coproduct"},
                                  {"member", c.morphism_name(g)},
                                  {"bottom_row", decomposition(c, bottom)},
                                  {"top_row", names(c, row)}},
                                 stats);
      // A commuting coproduct row over class verticals gives class pullbacks.
      for (const CospanDiagram& top : a.coproduct_decompositions(c.dom(g))) {
        std::array<std::vector<std::pair<MorphismId, bool>>, 2> side;
        for (std::size_t k = 0; k < 2; ++k) {
          const MorphismId gt = c.compose(g, top.legs[k]);
          for (MorphismId h : c.hom(top.base.objects[k], bottom.base.objects[k]))
            if (in_m(h) && c.compose(bottom.legs[k], h) == gt)
              side[k].emplace_back(h, a.is_pullback_square(top.legs[k], h, g, bottom.legs[k]) &&
                                          legs_ok(top.legs[k], h));
        }
        if (side[0].empty() || side[1].empty()) continue;
        for (std::size_t k = 0; k < 2; ++k)
          for (const auto& [h, ok] : side[k]) {
            ++diagrams;
            if (!ok)
              return CheckStatus::fail({{"clause", "coproduct gives pullbacks"},
                                        {"member", c.morphism_name(g)},
                                        {"top_row", decomposition(c, top)},
                                        {"bottom_row", decomposition(c, bottom)},
                                        {"vertical", c.morphism_name(h)},
                                        {"side", k == 0 ? "left" : "right"}},
                                       stats);
          }
      }
    }
  }
  stats["diagrams"] = diagrams;
  return {Status::pass, {}, stats};
}

std::string_view to_string(Commutation w) {
  return w == Commutation::products_coequalisers ? "products_coequalisers" : "coproducts_equalisers";
}

namespace {

struct Fork {
  MorphismId u, v, q;
};

CheckStatus commutation_impl(Analysis& a, std::size_t bound, std::uint64_t seed) {
  const FinCategory& c = a.category();
  // forks grouped by (source, target, quotient) objects; products depend only on those
  std::map<std::array<std::uint32_t, 3>, std::vector<Fork>> groups;
  std::size_t fork_count = 0;
  for (ObjectId s : c.objects())
    for (ObjectId t : c.objects()) {
      auto hom = c.hom(s, t);
      for (std::size_t i = 0; i < hom.size(); ++i)
        for (std::size_t j = i; j < hom.size(); ++j)
          if (auto q = a.coequaliser(hom[i], hom[j])) {
            groups[{s.value, t.value, q->nadir.value}].push_back({hom[i], hom[j], q->legs[0]});
            ++fork_count;
          }
    }

  struct Block {
    const std::vector<Fork>* first;
    const std::vector<Fork>* second;
    SpanDiagram src, mid, out;
    std::size_t offset;
  };
  std::vector<Block> blocks;
  std::size_t applicable = 0, skipped = 0;
  json skipped_examples = json::array();
  for (const auto& [k1, f1] : groups)
    for (const auto& [k2, f2] : groups) {
      auto src = a.product(ObjectId{k1[0]}, ObjectId{k2[0]});
      auto mid = a.product(ObjectId{k1[1]}, ObjectId{k2[1]});
      auto out = a.product(ObjectId{k1[2]}, ObjectId{k2[2]});
      const std::size_t n = f1.size() * f2.size();
      if (!src || !mid || !out) {
        skipped += n;
        if (skipped_examples.size() < witness_cap) {
          json miss = json::array();
          for (std::size_t r = 0; r < 3; ++r) {
            const bool present = r == 0 ? src.has_value() : r == 1 ? mid.has_value() : out.has_value();
            if (!present) miss.push_back({c.object_name(ObjectId{k1[r]}), c.object_name(ObjectId{k2[r]})});
          }
          skipped_examples.push_back({{"first", names(c, std::array{f1[0].u, f1[0].v})},
                                      {"second", names(c, std::array{f2[0].u, f2[0].v})},
                                      {"pairs", n},
                                      {"missing_products", miss}});
        }
        continue;
      }
      blocks.push_back({&f1, &f2, std::move(*src), std::move(*mid), std::move(*out), applicable});
      applicable += n;
    }

  std::vector<std::size_t> chosen;
  if (applicable <= bound) {
    for (std::size_t i = 0; i < applicable; ++i) chosen.push_back(i);
  } else if (applicable > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, applicable - 1);
    for (std::size_t n = 0; n < bound; ++n) chosen.push_back(pick(rng));
  }

  auto product_of = [&](const SpanDiagram& from, const SpanDiagram& to, MorphismId f1, MorphismId f2) {
    const MorphismId cone[2] = {c.compose(f1, from.legs[0]), c.compose(f2, from.legs[1])};
    auto m = a.mediator_into(to, from.apex, cone);
    if (!m) throw std::logic_error("certified product without mediator");
    return *m;
  };
  json stats{{"forks", fork_count},
             {"pairs_total", fork_count * fork_count},
             {"applicable_pairs", applicable},
             {"inapplicable_pairs", skipped},
             {"inapplicable_examples", skipped_examples},
             {"checked", chosen.size()}};
  for (std::size_t idx : chosen) {
    auto b = std::upper_bound(blocks.begin(), blocks.end(), idx,
                              [](std::size_t v, const Block& blk) { return v < blk.offset; }) - 1;
    const std::size_t local = idx - b->offset;
    const Fork& x = (*b->first)[local / b->second->size()];
    const Fork& y = (*b->second)[local % b->second->size()];
    const MorphismId uu = product_of(b->src, b->mid, x.u, y.u);
    const MorphismId vv = product_of(b->src, b->mid, x.v, y.v);
    const MorphismId qq = product_of(b->mid, b->out, x.q, y.q);
    if (!a.is_coequaliser(qq, uu, vv))
      return CheckStatus::fail({{"reason", "product of coequalisers is not a coequaliser"},
                                {"first", names(c, std::array{x.u, x.v, x.q})},
                                {"second", names(c, std::array{y.u, y.v, y.q})},
                                {"product_fork", names(c, std::array{uu, vv, qq})}},
                               stats);
  }
  if (chosen.empty()) return CheckStatus::inapplicable({{"reason", "no pair has the needed products"}}, stats);
  return {Status::pass, {}, stats};
}

}  // namespace

CheckStatus commutation_check(Analysis& a, Commutation which, std::size_t sample_bound, std::uint64_t seed) {
  Analysis& ctx = which == Commutation::products_coequalisers ? a : a.opposite();
  return commutation_impl(ctx, sample_bound, seed);
}

}  // namespace extmorph
