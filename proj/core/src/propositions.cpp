#include "extmorph/propositions.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "extmorph/relcalc.hpp"

namespace extmorph {

using nlohmann::json;

namespace {

constexpr std::size_t witness_cap = 8;

json names(const FinCategory& c, std::span<const MorphismId> ms) {
  json out = json::array();
  for (MorphismId m : ms) out.push_back(c.morphism_name(m));
  return out;
}

// Instance bookkeeping for one statement.
class Count {
 public:
  void instance() { ++instances_; }
  void vacuous() { ++vacuous_; }
  void skip(json why) {
    ++skipped_;
    if (skip_example_.is_null()) skip_example_ = std::move(why);
  }
  void fail(json w) {
    ++failed_;
    if (failures_.size() < witness_cap) failures_.push_back(std::move(w));
  }
  void check(bool ok, const std::function<json()>& w) {
    ++instances_;
    if (!ok) fail(w());
  }
  json& extra() { return extra_; }

  [[nodiscard]] json stats() const {
    json s = extra_;
    s["instances"] = instances_;
    s["failed"] = failed_;
    if (vacuous_ > 0) s["hypothesis_false"] = vacuous_;
    if (skipped_ > 0) {
      s["skipped"] = skipped_;
      s["skipped_example"] = skip_example_;
    }
    return s;
  }
  [[nodiscard]] CheckStatus result(std::string_view nothing) const {
    if (failed_ > 0) return CheckStatus::fail({{"counterexamples", failures_}}, stats());
    if (instances_ == 0) return CheckStatus::inapplicable({{"reason", nothing}}, stats());
    return {Status::pass, json(), stats()};
  }

 private:
  std::size_t instances_ = 0;
  std::size_t vacuous_ = 0;
  std::size_t skipped_ = 0;
  std::size_t failed_ = 0;
  std::vector<json> failures_;
  json skip_example_;
  json extra_ = json::object();
};

CheckStatus pass_with(json stats) { return {Status::pass, json(), std::move(stats)}; }

// Memoised per-morphism conditions.
class Facts {
 public:
  explicit Facts(Analysis& a) : a_(a), c_(a.category()) {}

  Analysis& analysis() { return a_; }
  const FinCategory& cat() const { return c_; }

  bool extensive(MorphismId f) { return memo(ext_, f, [&] { return is_extensive_morphism(a_, f); }); }
  bool coextensive(MorphismId f) { return memo(coext_, f, [&] { return is_coextensive_morphism(a_, f); }); }
  bool e1(MorphismId f) { return memo(e1_, f, [&] { return check_e1(a_, f); }); }
  bool e2(MorphismId f) { return memo(e2_, f, [&] { return check_e2(a_, f); }); }
  bool c1(MorphismId f) { return memo(c1_, f, [&] { return check_c1(a_, f); }); }
  bool c2(MorphismId f) { return memo(c2_, f, [&] { return check_c2(a_, f); }); }

  std::vector<MorphismId> where(const std::function<bool(MorphismId)>& p) {
    std::vector<MorphismId> out;
    for (MorphismId f : c_.morphisms())
      if (p(f)) out.push_back(f);
    return out;
  }
  std::vector<MorphismId> identities() {
    std::vector<MorphismId> out;
    for (ObjectId x : c_.objects()) out.push_back(c_.identity(x));
    return out;
  }
  std::vector<MorphismId> isos() { return where([&](MorphismId f) { return a_.is_iso(f); }); }
  std::vector<MorphismId> inclusions() { return where([&](MorphismId f) { return a_.is_coproduct_inclusion(f); }); }
  std::vector<MorphismId> projections() { return where([&](MorphismId f) { return a_.is_product_projection(f); }); }

  // First morphism of `ms` failing `p`, if any.
  std::optional<MorphismId> first_failing(std::span<const MorphismId> ms, const std::function<bool(MorphismId)>& p) {
    for (MorphismId f : ms)
      if (!p(f)) return f;
    return std::nullopt;
  }

  // Legs of every binary product diagram of x.
  std::vector<MorphismId> projections_of(ObjectId x) {
    std::vector<MorphismId> out;
    for (const SpanDiagram& d : a_.product_decompositions(x, 2)) out.insert(out.end(), d.legs.begin(), d.legs.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool is_terminal_object(ObjectId t) {
    for (ObjectId o : c_.objects())
      if (c_.hom(o, t).size() != 1) return false;
    return true;
  }

 private:
  bool memo(std::vector<std::int8_t>& v, MorphismId f, const std::function<CheckStatus()>& run) {
    if (v.empty()) v.assign(c_.morphism_count(), -1);
    auto& slot = v[f.index()];
    if (slot < 0) slot = run().passed() ? 1 : 0;
    return slot == 1;
  }

  Analysis& a_;
  const FinCategory& c_;
  std::vector<std::int8_t> ext_, coext_, e1_, e2_, c1_, c2_;
};

json side(bool holds, std::optional<json> witness = std::nullopt) {
  json j{{"holds", holds}};
  if (witness) j["witness"] = *witness;
  return j;
}

// Two independently computed sides of an equivalence.
CheckStatus biconditional(const char* left_name, const json& left, const char* right_name, const json& right,
                          json stats = json::object()) {
  stats[left_name] = left;
  stats[right_name] = right;
  if (left["holds"] == right["holds"]) return pass_with(std::move(stats));
  return CheckStatus::fail({{left_name, left}, {right_name, right}}, std::move(stats));
}

// ------------------------------------------------------------------ statements

CheckStatus prop_composite(Facts& F) {
  const FinCategory& c = F.cat();
  Count n;
  auto ext = F.where([&](MorphismId f) { return F.extensive(f); });
  std::vector<std::vector<MorphismId>> out_of(c.object_count());
  for (MorphismId g : ext) out_of[c.dom(g).index()].push_back(g);
  for (MorphismId f : ext)
    for (MorphismId g : out_of[c.cod(f).index()]) {
      const MorphismId gf = c.compose(g, f);
      n.check(F.extensive(gf), [&] {
        return json{{"f", c.morphism_name(f)}, {"g", c.morphism_name(g)}, {"composite", c.morphism_name(gf)},
                    {"composite_status", to_json(is_extensive_morphism(F.analysis(), gf))}};
      });
    }
  n.extra()["extensive_morphisms"] = ext.size();
  return n.result("no extensive morphisms");
}

CheckStatus cor_reduction(Facts& F) {
  Analysis& a = F.analysis();
  const CheckStatus ext = category_report(a, ReportMode::extensive).agreement;
  const CheckStatus co = category_report(a, ReportMode::coextensive).agreement;
  json stats{{"extensive", to_json(ext)}, {"coextensive", to_json(co)}};
  if (ext.failed() || co.failed()) return CheckStatus::fail({{"extensive", to_json(ext)}, {"coextensive", to_json(co)}}, stats);
  if (ext.status == Status::inapplicable && co.status == Status::inapplicable)
    return CheckStatus::inapplicable({{"reason", "binary coproducts and binary products both missing"}}, stats);
  return pass_with(stats);
}

// For every coproduct diagram of dom g there is a coproduct diagram of cod g and
// components making both squares pullbacks.
bool squares_exist(Facts& F, MorphismId g) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  for (const CospanDiagram& top : a.coproduct_decompositions(c.dom(g), 2)) {
    bool found = false;
    for (const CospanDiagram& bottom : a.coproduct_decompositions(c.cod(g), 2)) {
      std::array<bool, 2> ok{false, false};
      for (std::size_t i = 0; i < 2; ++i) {
        const MorphismId yi = top.legs[i];
        const MorphismId zi = bottom.legs[i];
        for (MorphismId gi : c.hom(c.dom(yi), c.dom(zi)))
          if (c.compose(zi, gi) == c.compose(g, yi) && a.is_pullback_square(yi, gi, g, zi)) {
            ok[i] = true;
            break;
          }
      }
      if (ok[0] && ok[1]) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

CheckStatus lemma_squares_exist(Facts& F) {
  const FinCategory& c = F.cat();
  Count n;
  std::vector<std::int8_t> has(c.morphism_count(), -1);
  for (MorphismId g : c.morphisms()) {
    const ObjectId y = c.dom(g);
    for (ObjectId x : c.objects())
      for (MorphismId f : c.hom(x, y)) {
        const MorphismId gf = c.compose(g, f);
        if (!F.extensive(gf)) {
          n.vacuous();
          continue;
        }
        if (has[g.index()] < 0) has[g.index()] = squares_exist(F, g) ? 1 : 0;
        if (has[g.index()] == 0) {
          n.vacuous();
          continue;
        }
        n.check(F.extensive(f), [&] {
          return json{{"f", c.morphism_name(f)}, {"g", c.morphism_name(g)}, {"composite", c.morphism_name(gf)},
                      {"f_status", to_json(is_extensive_morphism(F.analysis(), f))}};
        });
      }
  }
  return n.result("no composite satisfies the hypotheses");
}

CheckStatus prop_inclusion_cancel(Facts& F) {
  const FinCategory& c = F.cat();
  Count n;
  for (MorphismId i : F.inclusions()) {
    if (!F.e2(i)) {
      n.vacuous();
      continue;
    }
    for (ObjectId x : c.objects())
      for (MorphismId f : c.hom(x, c.dom(i))) {
        const MorphismId composite = c.compose(i, f);
        if (!F.extensive(composite)) {
          n.vacuous();
          continue;
        }
        n.check(F.extensive(f), [&] {
          return json{{"inclusion", c.morphism_name(i)}, {"f", c.morphism_name(f)},
                      {"f_status", to_json(is_extensive_morphism(F.analysis(), f))}};
        });
      }
  }
  return n.result("no inclusion satisfying E2 with an extensive composite");
}

CheckStatus prop_iso_c1(Facts& F) {
  const FinCategory& c = F.cat();
  Count n;
  for (MorphismId f : F.isos()) {
    n.check(F.c1(f) && F.e1(f), [&] {
      return json{{"iso", c.morphism_name(f)}, {"C1", to_json(check_c1(F.analysis(), f))},
                  {"E1", to_json(check_e1(F.analysis(), f))}};
    });
  }
  return n.result("no isomorphisms");
}

// Whether f1 x f2 iso forces f1 and f2 iso, over every pair of products that
// exist and are isomorphic.
json products_reflect_isos(Analysis& a) {
  const FinCategory& c = a.category();
  std::vector<std::pair<std::pair<ObjectId, ObjectId>, SpanDiagram>> prods;
  for (ObjectId x : c.objects())
    for (ObjectId y : c.objects())
      if (auto p = a.product(x, y)) prods.push_back({{x, y}, *p});
  auto isomorphic = [&](ObjectId u, ObjectId v) {
    for (MorphismId h : c.hom(u, v))
      if (a.is_iso(h)) return true;
    return false;
  };
  std::size_t instances = 0;
  for (const auto& [dom_pair, pa] : prods)
    for (const auto& [cod_pair, pb] : prods) {
      if (!isomorphic(pa.apex, pb.apex)) continue;
      for (MorphismId f1 : c.hom(dom_pair.first, cod_pair.first))
        for (MorphismId f2 : c.hom(dom_pair.second, cod_pair.second)) {
          const std::array<MorphismId, 2> legs{c.compose(f1, pa.legs[0]), c.compose(f2, pa.legs[1])};
          auto ff = a.mediator_into(pb, pa.apex, legs);
          if (!ff || !a.is_iso(*ff)) continue;
          ++instances;
          if (!a.is_iso(f1) || !a.is_iso(f2))
            return {{"holds", false},
                    {"instances", instances},
                    {"witness", {{"f1", c.morphism_name(f1)}, {"f2", c.morphism_name(f2)},
                                 {"product", c.morphism_name(*ff)}}}};
        }
    }
  return {{"holds", true}, {"instances", instances}};
}

json all_hold(Facts& F, std::span<const MorphismId> ms, const std::function<bool(MorphismId)>& p) {
  if (auto bad = F.first_failing(ms, p)) return side(false, json(F.cat().morphism_name(*bad)));
  return side(true);
}

CheckStatus prop_iso_c2_product(Facts& F) {
  auto isos = F.isos();
  const json left = all_hold(F, isos, [&](MorphismId f) { return F.c2(f); });
  const json right = products_reflect_isos(F.analysis());
  return biconditional("isos_satisfy_C2", left, "products_reflect_isos", right);
}

CheckStatus prop_c1_identity_c2(Facts& F) {
  const FinCategory& c = F.cat();
  Count n;
  std::size_t literal_failures = 0;
  json literal_example;
  for (MorphismId f : c.morphisms()) {
    if (!F.c1(f) || !F.c2(c.identity(c.cod(f)))) {
      n.vacuous();
      continue;
    }
    n.check(F.coextensive(f), [&] {
      return json{{"f", c.morphism_name(f)}, {"status", to_json(is_coextensive_morphism(F.analysis(), f))}};
    });
    if (!F.extensive(f)) {
      ++literal_failures;
      if (literal_example.is_null()) literal_example = c.morphism_name(f);
    }
  }
  // The statement as printed concludes "extensive"; reported, not asserted.
  n.extra()["literal_reading"] = {{"extensive_failures", literal_failures}, {"example", literal_example}};
  return n.result("no morphism satisfies C1 with C2 at its codomain identity");
}

CheckStatus cor_e1_suffices(Facts& F) {
  const FinCategory& c = F.cat();
  auto ids = F.identities();
  json stats = json::object();
  json failures = json::array();
  bool applicable = false;
  auto run = [&](const char* name, bool gate, const std::function<bool(MorphismId)>& full,
                 const std::function<bool(MorphismId)>& first) {
    if (!gate) {
      stats[name] = "identities fail the hypothesis";
      return;
    }
    applicable = true;
    std::size_t checked = 0;
    for (MorphismId f : c.morphisms()) {
      ++checked;
      if (full(f) != first(f) && failures.size() < witness_cap)
        failures.push_back({{"variant", name}, {"morphism", c.morphism_name(f)}, {"full", full(f)}, {"first", first(f)}});
    }
    stats[name] = {{"instances", checked}};
  };
  run("extensive", std::all_of(ids.begin(), ids.end(), [&](MorphismId i) { return F.extensive(i); }),
      [&](MorphismId f) { return F.extensive(f); }, [&](MorphismId f) { return F.e1(f); });
  run("coextensive", std::all_of(ids.begin(), ids.end(), [&](MorphismId i) { return F.coextensive(i); }),
      [&](MorphismId f) { return F.coextensive(f); }, [&](MorphismId f) { return F.c1(f); });
  if (!failures.empty()) return CheckStatus::fail({{"counterexamples", failures}}, stats);
  if (!applicable) return CheckStatus::inapplicable({{"reason", "identities are neither all extensive nor all coextensive"}}, stats);
  return pass_with(stats);
}

CheckStatus cor_identity_iso(Facts& F) {
  auto ids = F.identities();
  auto isos = F.isos();
  const CheckStatus ext = biconditional("isos", all_hold(F, isos, [&](MorphismId f) { return F.extensive(f); }),
                                        "identities", all_hold(F, ids, [&](MorphismId f) { return F.extensive(f); }));
  const CheckStatus co =
      biconditional("isos", all_hold(F, isos, [&](MorphismId f) { return F.coextensive(f); }), "identities",
                    all_hold(F, ids, [&](MorphismId f) { return F.coextensive(f); }));
  json stats{{"extensive", ext.stats}, {"coextensive", co.stats}};
  if (ext.failed() || co.failed()) return CheckStatus::fail({{"extensive", to_json(ext)}, {"coextensive", to_json(co)}}, stats);
  return pass_with(stats);
}

CheckStatus lemma_product_lift_mono(Facts& F) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  Count n;
  std::vector<std::vector<MorphismId>> monos_into(c.object_count());
  for (MorphismId m : c.morphisms())
    if (a.is_mono(m)) monos_into[c.cod(m).index()].push_back(m);
  // All factorisations p = m . q with m mono.
  auto lifts = [&](MorphismId p) {
    std::vector<std::pair<MorphismId, MorphismId>> out;
    for (MorphismId m : monos_into[c.cod(p).index()])
      for (MorphismId q : c.hom(c.dom(p), c.dom(m)))
        if (c.compose(m, q) == p) out.emplace_back(m, q);
    return out;
  };
  for (ObjectId x : c.objects())
    for (const SpanDiagram& d : a.product_decompositions(x, 2)) {
      auto l1 = lifts(d.legs[0]);
      auto l2 = lifts(d.legs[1]);
      for (auto [m1, q1] : l1)
        for (auto [m2, q2] : l2)
          n.check(a.is_product(q1, q2), [&] {
            return json{{"bottom_row", names(c, d.legs)},
                        {"monos", {c.morphism_name(m1), c.morphism_name(m2)}},
                        {"top_row", {c.morphism_name(q1), c.morphism_name(q2)}}};
          });
    }
  return n.result("no product diagrams");
}

CheckStatus prop_extremal_projections(Facts& F) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  Count n;
  std::size_t forward = 0;
  std::size_t converse = 0;
  std::size_t converse_gated = 0;
  for (ObjectId x : c.objects()) {
    const bool id_coext = F.coextensive(c.identity(x));
    auto projs = F.projections_of(x);
    const auto bad = F.first_failing(projs, [&](MorphismId p) { return a.profile(p).is_extremal_epi; });
    const bool extremal = !bad;
    auto witness = [&] {
      json w{{"object", c.object_name(x)}, {"identity_coextensive", id_coext}, {"projections_extremal", extremal}};
      if (bad) w["non_extremal_projection"] = c.morphism_name(*bad);
      if (!id_coext) w["identity_status"] = to_json(is_coextensive_morphism(a, c.identity(x)));
      return w;
    };
    if (id_coext) {
      ++forward;
      n.check(extremal, witness);
    }
    // Kernel pairs of every morphism out of a factor of x.
    bool kernels = true;
    for (const SpanDiagram& d : a.product_decompositions(x, 2))
      for (MorphismId p : d.legs)
        for (ObjectId y : c.objects())
          for (MorphismId f : c.hom(c.cod(p), y))
            if (kernels && !a.kernel_pair(f)) kernels = false;
    if (!kernels) {
      ++converse_gated;
      continue;
    }
    if (extremal) {
      ++converse;
      n.check(id_coext, witness);
    }
  }
  n.extra()["forward_instances"] = forward;
  n.extra()["converse_instances"] = converse;
  n.extra()["objects_missing_kernel_pairs"] = converse_gated;
  return n.result("no object satisfies either direction's hypotheses");
}

CheckStatus prop_conservative(Facts& F) {
  auto ids = F.identities();
  const json left = all_hold(F, ids, [&](MorphismId f) { return F.extensive(f); });
  // Coproducts of morphisms are products in the opposite category.
  const json right = products_reflect_isos(F.analysis().opposite());
  return biconditional("identities_extensive", left, "coproducts_reflect_isos", right);
}

CheckStatus prop_inclusions_regular_mono(Facts& F) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  auto incl = F.inclusions();
  if (auto bad = F.first_failing(incl, [&](MorphismId i) { return F.e2(i); }))
    return CheckStatus::inapplicable({{"hypothesis", "every coproduct inclusion satisfies E2"},
                                      {"inclusion", c.morphism_name(*bad)},
                                      {"witness", to_json(check_e2(a, *bad))}});
  Count n;
  const CheckStatus disjoint = coproduct_disjointness(a);
  n.extra()["disjointness"] = to_json(disjoint);
  if (disjoint.failed()) n.fail({{"conclusion", "coproducts disjoint"}, {"witness", disjoint.witness}});
  for (ObjectId x : c.objects())
    for (const CospanDiagram& d : a.coproduct_decompositions(x, 2))
      for (std::size_t k = 0; k < 2; ++k) {
        const MorphismId i = d.legs[k];
        const ObjectId complement = c.dom(d.legs[1 - k]);
        // the argument uses the coproduct of the ambient object with the complement
        if (!a.coproduct(x, complement)) {
          n.skip({{"inclusion", c.morphism_name(i)}, {"missing", "coproduct with the complement"}});
          continue;
        }
        n.check(a.profile(i).is_regular_mono, [&] {
          return json{{"conclusion", "regular mono"}, {"inclusion", c.morphism_name(i)},
                      {"coproduct", names(c, d.legs)}};
        });
      }
  return n.result("no coproduct inclusion with the needed coproduct");
}

CheckStatus prop_crisp_extensive(Facts& F) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  if (!a.initial()) return CheckStatus::inapplicable({{"hypothesis", "initial object"}});
  const CheckStatus disjoint = coproduct_disjointness(a);
  if (!disjoint.passed())
    return CheckStatus::inapplicable({{"hypothesis", "disjoint coproducts"}, {"witness", to_json(disjoint)}});
  auto incl = F.inclusions();
  if (auto bad = F.first_failing(incl, [&](MorphismId i) { return F.e1(i); }))
    return CheckStatus::inapplicable(
        {{"hypothesis", "every coproduct inclusion satisfies E1"}, {"inclusion", c.morphism_name(*bad)}});
  Count n;
  for (MorphismId f : c.morphisms()) {
    if (!F.e1(f)) {
      n.vacuous();
      continue;
    }
    n.check(F.extensive(f), [&] {
      return json{{"f", c.morphism_name(f)}, {"status", to_json(is_extensive_morphism(a, f))}};
    });
  }
  return n.result("no morphism satisfies E1");
}

CheckStatus cor_inclusions_extensive(Facts& F) {
  Analysis& a = F.analysis();
  if (!a.initial()) return CheckStatus::inapplicable({{"hypothesis", "initial object"}});
  auto incl = F.inclusions();
  const json left = all_hold(F, incl, [&](MorphismId f) { return F.extensive(f); });
  const CheckStatus disjoint = coproduct_disjointness(a);
  json right = all_hold(F, incl, [&](MorphismId f) { return F.e1(f); });
  right["disjoint"] = disjoint.passed();
  right["holds"] = right["holds"].get<bool>() && disjoint.passed();
  return biconditional("inclusions_extensive", left, "disjoint_and_inclusions_E1", right);
}

CheckStatus prop_pullback_stable(Facts& F) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  auto incl = F.inclusions();
  if (auto bad = F.first_failing(incl, [&](MorphismId i) { return F.extensive(i); }))
    return CheckStatus::inapplicable(
        {{"hypothesis", "every coproduct inclusion extensive"}, {"inclusion", c.morphism_name(*bad)}});
  std::vector<std::vector<MorphismId>> into(c.object_count());
  for (MorphismId i : incl) into[c.cod(i).index()].push_back(i);
  Count n;
  for (MorphismId f : c.morphisms()) {
    if (!F.extensive(f)) continue;
    for (MorphismId i : into[c.cod(f).index()]) {
      auto pb = a.pullback(f, i);
      n.check(pb && F.extensive(pb->legs[1]), [&] {
        json w{{"f", c.morphism_name(f)}, {"inclusion", c.morphism_name(i)}};
        if (pb)
          w["pulled_back"] = c.morphism_name(pb->legs[1]);
        else
          w["missing"] = "pullback";
        return w;
      });
    }
  }
  return n.result("no extensive morphism into an object with coproduct inclusions");
}

// Top row a coequaliser q1 of (u1, v1), e epi, f with f u1 = u2 e and f v1 = v2 e,
// q2 with q2 u2 = q2 v2, g induced: the right square is a pushout iff q2
// coequalises (u2, v2) universally.
CheckStatus lemma_common_coequaliser(Facts& F, const SuiteOptions& opt) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  struct Fork {
    MorphismId u, v;
    CospanDiagram q;
  };
  std::vector<Fork> forks;
  for (ObjectId s : c.objects())
    for (ObjectId x : c.objects()) {
      auto hom = c.hom(s, x);
      for (std::size_t i = 0; i < hom.size(); ++i)
        for (std::size_t j = i; j < hom.size(); ++j)
          if (auto q = a.coequaliser(hom[i], hom[j])) forks.push_back({hom[i], hom[j], *q});
    }
  std::vector<std::vector<MorphismId>> epis_from(c.object_count());
  std::vector<std::vector<MorphismId>> out_of(c.object_count());
  for (MorphismId m : c.morphisms()) {
    out_of[c.dom(m).index()].push_back(m);
    if (a.is_epi(m)) epis_from[c.dom(m).index()].push_back(m);
  }
  std::vector<std::size_t> ends;
  std::size_t total = 0;
  for (const Fork& k : forks) {
    const ObjectId src = c.dom(k.u);
    total += epis_from[src.index()].size() * out_of[c.cod(k.u).index()].size();
    ends.push_back(total);
  }

  Count n;
  std::size_t pairs_found = 0;
  auto visit = [&](std::size_t idx) {
    const auto blk = static_cast<std::size_t>(std::upper_bound(ends.begin(), ends.end(), idx) - ends.begin());
    const Fork& k = forks[blk];
    const std::size_t off = idx - (blk == 0 ? 0 : ends[blk - 1]);
    const auto& es = epis_from[c.dom(k.u).index()];
    const auto& fs = out_of[c.cod(k.u).index()];
    const MorphismId e = es[off / fs.size()];
    const MorphismId f = fs[off % fs.size()];
    const MorphismId fu = c.compose(f, k.u);
    const MorphismId fv = c.compose(f, k.v);
    // e is epi, so u2 and v2 are unique when they exist
    std::optional<MorphismId> u2, v2;
    for (MorphismId h : c.hom(c.cod(e), c.cod(f))) {
      if (!u2 && c.compose(h, e) == fu) u2 = h;
      if (!v2 && c.compose(h, e) == fv) v2 = h;
    }
    if (!u2 || !v2) return n.vacuous();
    ++pairs_found;
    const MorphismId q1 = k.q.legs[0];
    for (ObjectId t : c.objects())
      for (MorphismId q2 : c.hom(c.cod(f), t)) {
        if (c.compose(q2, *u2) != c.compose(q2, *v2)) continue;
        const std::array<MorphismId, 1> cocone{c.compose(q2, f)};
        auto g = a.mediator_out_of(k.q, t, cocone);
        if (!g) {
          n.skip({{"reason", "no induced map"}});
          continue;
        }
        const bool pushout = a.is_pushout_square(*g, q2, q1, f);
        const bool coequaliser = a.is_coequaliser(q2, *u2, *v2);
        n.check(pushout == coequaliser, [&] {
          return json{{"top_row", {c.morphism_name(k.u), c.morphism_name(k.v), c.morphism_name(q1)}},
                      {"bottom_row", {c.morphism_name(*u2), c.morphism_name(*v2), c.morphism_name(q2)}},
                      {"verticals", {c.morphism_name(e), c.morphism_name(f), c.morphism_name(*g)}},
                      {"pushout", pushout},
                      {"coequaliser", coequaliser}};
        });
      }
  };
  if (total <= opt.sample_bound) {
    for (std::size_t i = 0; i < total; ++i) visit(i);
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    for (std::size_t i = 0; i < opt.sample_bound; ++i) visit(pick(rng));
  }
  n.extra()["forks"] = forks.size();
  n.extra()["candidate_triples"] = total;
  n.extra()["sampled"] = total > opt.sample_bound;
  n.extra()["triples_with_bottom_fork"] = pairs_found;
  return n.result("no reasonably commutative diagram found");
}

CheckStatus lemma_codisjoint(Facts& F) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  auto projs = F.projections();
  if (auto bad = F.first_failing(projs, [&](MorphismId p) { return a.profile(p).is_regular_epi; }))
    return CheckStatus::inapplicable(
        {{"hypothesis", "every product projection is a regular epi"}, {"projection", c.morphism_name(*bad)}});
  Count n;
  for (ObjectId p : c.objects())
    for (const SpanDiagram& d : a.product_decompositions(p, 2)) {
      const ObjectId x = c.cod(d.legs[0]);
      const ObjectId y = c.cod(d.legs[1]);
      auto yy = a.product(y, y);
      if (!yy || !a.product(x, yy->apex)) {
        n.skip({{"row", names(c, d.legs)}, {"missing", "Y x Y or X x (Y x Y)"}});
        continue;
      }
      auto po = a.pushout(d.legs[0], d.legs[1]);
      n.check(a.is_epi(d.legs[0]) && a.is_epi(d.legs[1]) && po && F.is_terminal_object(po->nadir), [&] {
        json w{{"row", names(c, d.legs)}};
        if (po)
          w["pushout"] = c.object_name(po->nadir);
        else
          w["missing"] = "pushout";
        return w;
      });
    }
  return n.result("no product diagram with the needed products");
}

CheckStatus prop_srp_binary(Facts& F) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  Count n;
  auto projs = F.projections();
  const bool regular = !F.first_failing(projs, [&](MorphismId p) { return a.profile(p).is_regular_epi; });
  const bool codisjoint = product_codisjointness(a).passed();
  std::size_t forward = 0;
  std::size_t converse = 0;
  for (ObjectId x : c.objects()) {
    auto own = F.projections_of(x);
    const bool coext = !F.first_failing(own, [&](MorphismId p) { return F.coextensive(p); });
    const CheckStatus srp = has_binary_srp(a, x);
    auto witness = [&] {
      return json{{"object", c.object_name(x)}, {"projections_coextensive", coext}, {"srp", to_json(srp)}};
    };
    if (coext) {
      ++forward;
      n.check(srp.passed(), witness);
    }
    if (!regular || !codisjoint || !srp.passed()) continue;
    // kernel pairs of the projections of x and of its factors
    bool kernels = true;
    for (MorphismId p : own) {
      if (!a.kernel_pair(p)) kernels = false;
      for (MorphismId q : F.projections_of(c.cod(p)))
        if (!a.kernel_pair(q)) kernels = false;
    }
    if (!kernels) {
      n.skip({{"object", c.object_name(x)}, {"missing", "kernel pair of a projection"}});
      continue;
    }
    ++converse;
    n.check(coext, witness);
  }
  n.extra()["forward_instances"] = forward;
  n.extra()["converse_instances"] = converse;
  n.extra()["converse_hypotheses"] = {{"projections_regular_epi", regular}, {"products_codisjoint", codisjoint}};
  return n.result("no object has coextensive projections");
}

CheckStatus thm_srp_finite(Facts& F) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  Count n;
  for (ObjectId x : c.objects()) {
    auto own = F.projections_of(x);
    if (F.first_failing(own, [&](MorphismId p) { return F.coextensive(p); })) {
      n.vacuous();
      continue;
    }
    const CheckStatus srp = has_finite_srp(a, x, 3);
    n.check(srp.passed(), [&] { return json{{"object", c.object_name(x)}, {"srp", to_json(srp)}}; });
  }
  n.extra()["arity"] = 3;
  return n.result("no object has coextensive projections");
}

CheckStatus prop_coextensive_converse(Facts& F, const SuiteOptions& opt) {
  Analysis& a = F.analysis();
  const FinCategory& c = F.cat();
  auto missing = [](const char* h, json w = json()) {
    json out{{"hypothesis", h}};
    if (!w.is_null()) out["witness"] = std::move(w);
    return CheckStatus::inapplicable(out);
  };
  auto t = a.terminal();
  if (!t) return missing("terminal object");
  if (!a.has_binary_products()) return missing("binary products");
  if (!a.has_equalisers()) return missing("equalisers");
  for (ObjectId x : c.objects())
    if (!a.profile(c.hom(x, t->apex)[0]).is_regular_epi)
      return missing("terminal morphisms are regular epis", c.object_name(x));
  auto projs = F.projections();
  for (MorphismId e : c.morphisms()) {
    if (!a.profile(e).is_regular_epi) continue;
    for (MorphismId p : projs)
      if (c.dom(p) == c.dom(e) && !a.pushout(e, p))
        return missing("pushouts of regular epis along projections",
                       json{{"regular_epi", c.morphism_name(e)}, {"projection", c.morphism_name(p)}});
  }
  const CheckStatus commute = commutation_check(a, Commutation::products_coequalisers, opt.sample_bound, opt.seed);
  if (!commute.passed()) return missing("products commute with coequalisers", to_json(commute));
  const CheckStatus split = category_report(a, ReportMode::coextensive, MorphismClass::split_mono).verdict;
  if (!split.passed()) return missing("split monomorphisms coextensive", split.witness);
  const CheckStatus all = category_report(a, ReportMode::coextensive).verdict;
  if (!all.passed()) return CheckStatus::fail({{"conclusion", "coextensive"}, {"witness", all.witness}});
  return pass_with({{"coextensive", to_json(all)}});
}

CheckStatus thm_barr_exact(Facts& F) {
  RelationCalculus rc(F.analysis());
  return barr_exact_check(rc);
}

using Runner = std::function<CheckStatus(Facts&, const SuiteOptions&)>;

struct Entry {
  PropositionInfo info;
  Runner run;
};

template <class Fn>
Runner plain(Fn fn) {
  return [fn](Facts& f, const SuiteOptions&) { return fn(f); };
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all{
      {{"prop-composite", "2", "composites of extensive morphisms are extensive"}, plain(prop_composite)},
      {{"cor-reduction", "2", "extensive iff split epis and coproduct inclusions are (and dually)"},
       plain(cor_reduction)},
      {{"lemma-squares-exist", "2", "gf extensive and pullback squares for g give f extensive"},
       plain(lemma_squares_exist)},
      {{"prop-inclusion-cancel", "2", "i f extensive with i an E2 coproduct inclusion gives f extensive"},
       plain(prop_inclusion_cancel)},
      {{"prop-iso-c1", "2", "isomorphisms satisfy C1 and E1"}, plain(prop_iso_c1)},
      {{"prop-iso-c2-product", "2", "isos satisfy C2 iff products of morphisms reflect isos"},
       plain(prop_iso_c2_product)},
      {{"prop-c1-identity-c2", "2", "C1 for f and C2 for the codomain identity give f coextensive"},
       plain(prop_c1_identity_c2)},
      {{"cor-e1-suffices", "2", "with extensive identities, E1 alone decides extensivity (and dually)"},
       plain(cor_e1_suffices)},
      {{"cor-identity-iso", "2", "isos are extensive iff identities are (and dually)"}, plain(cor_identity_iso)},
      {{"lemma-product-lift-mono", "2", "product rows lift through monos under the factors"},
       plain(lemma_product_lift_mono)},
      {{"prop-extremal-projections", "2", "coextensive identity iff product projections are extremal epis"},
       plain(prop_extremal_projections)},
      {{"prop-conservative", "2", "extensive identities iff coproducts of morphisms reflect isos"},
       plain(prop_conservative)},
      {{"prop-inclusions-regular-mono", "2", "E2 inclusions make coproducts disjoint and inclusions regular monos"},
       plain(prop_inclusions_regular_mono)},
      {{"prop-crisp-extensive", "2", "with disjoint coproducts and E1 inclusions, E1 implies extensive"},
       plain(prop_crisp_extensive)},
      {{"cor-inclusions-extensive", "2", "inclusions extensive iff coproducts disjoint and inclusions E1"},
       plain(cor_inclusions_extensive)},
      {{"prop-pullback-stable", "2", "extensive morphisms pull back along inclusions to extensive ones"},
       plain(prop_pullback_stable)},
      {{"lemma-common-coequaliser", "2", "over an epi, the right square is a pushout iff the bottom row coequalises"},
       [](Facts& f, const SuiteOptions& o) { return lemma_common_coequaliser(f, o); }},
      {{"lemma-codisjoint", "2", "regular epi projections make products codisjoint"}, plain(lemma_codisjoint)},
      {{"prop-srp-binary", "2", "coextensive projections iff binary strict refinement"}, plain(prop_srp_binary)},
      {{"thm-srp-finite", "2", "coextensive projections give finite strict refinement"}, plain(thm_srp_finite)},
      {{"prop-coextensive-converse", "2", "split monos coextensive and products commuting with coequalisers give coextensive"},
       [](Facts& f, const SuiteOptions& o) { return prop_coextensive_converse(f, o); }},
      {{"thm-barr-exact", "3", "in a Barr-exact category, split monos coextensive iff coextensive"},
       plain(thm_barr_exact)},
  };
  return all;
}

}  // namespace

const std::vector<PropositionInfo>& proposition_catalogue() {
  static const std::vector<PropositionInfo> infos = [] {
    std::vector<PropositionInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

CheckStatus run_proposition(Analysis& a, std::string_view id, const SuiteOptions& opt) {
  for (const auto& e : entries())
    if (e.info.id == id) {
      Facts facts(a);
      return e.run(facts, opt);
    }
  throw std::invalid_argument("unknown proposition id: " + std::string(id));
}

std::vector<std::pair<std::string, CheckStatus>> proposition_suite(Analysis& a, std::span<const std::string> selection,
                                                                   const SuiteOptions& opt) {
  for (const auto& s : selection)
    if (std::none_of(entries().begin(), entries().end(), [&](const Entry& e) { return e.info.id == s; }))
      throw std::invalid_argument("unknown proposition id: " + s);
  Facts facts(a);
  std::vector<std::pair<std::string, CheckStatus>> out;
  for (const auto& e : entries())
    if (selection.empty() || std::find(selection.begin(), selection.end(), e.info.id) != selection.end())
      out.emplace_back(e.info.id, e.run(facts, opt));
  return out;
}

}  // namespace extmorph
