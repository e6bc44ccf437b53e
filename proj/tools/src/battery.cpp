#include "battery.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "extmorph/algebra.hpp"
#include "extmorph/propositions.hpp"
#include "extmorph/relcalc.hpp"

namespace extmorph::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- categories

struct NamedCategory {
  std::string name;
  std::function<BuiltCategory()> build;
};

BuilderConfig config(AlgebraKind k, int n) { return {k, n, true, true, true, std::nullopt}; }

BuiltCategory dual_of(BuiltCategory b) {
  b.category = dual(b.category);
  return b;
}

const std::vector<NamedCategory>& category_registry() {
  static const std::vector<NamedCategory> all{
      {"finset3", [] { return build_category(config(AlgebraKind::set, 3)); }},
      {"finset4", [] { return build_category(config(AlgebraKind::set, 4)); }},
      {"dual-finset3", [] { return dual_of(build_category(config(AlgebraKind::set, 3))); }},
      {"pointed3", [] { return build_category(config(AlgebraKind::pointed_set, 3)); }},
      {"chain2", [] { return thin_category(chain(AlgebraKind::poset, 2)); }},
      {"lattice4", [] { return build_category(config(AlgebraKind::lattice, 4)); }},
      {"cpos3", [] { return build_category(config(AlgebraKind::connected_poset, 3)); }},
      {"slat4", [] { return build_category(config(AlgebraKind::semilattice, 4)); }},
      {"monoid4", [] { return build_category(config(AlgebraKind::monoid, 4)); }},
      {"z2", [] { return monoid_category(cyclic_group(2)); }},
  };
  return all;
}

const std::vector<std::string> proposition_categories{"finset3", "finset4", "dual-finset3", "pointed3", "chain2",
                                                      "lattice4", "cpos3",   "slat4",        "z2"};
const std::vector<std::string> relation_categories{"finset3", "dual-finset3", "lattice4"};

class Categories {
 public:
  void require(const std::string& name) { wanted_.insert(name); }
  // Builds everything requested, before any worker starts.
  void build() {
    for (const auto& n : category_registry())
      if (wanted_.count(n.name) && !built_.count(n.name)) built_.emplace(n.name, n.build());
  }
  const BuiltCategory& get(const std::string& name) const { return built_.at(name); }

 private:
  std::set<std::string> wanted_;
  std::map<std::string, BuiltCategory> built_;
};

// ------------------------------------------------------------------ examples

struct Example {
  std::string id;
  std::vector<std::string> needs;
  std::function<CheckStatus(const Categories&)> run;
};

bool surjective(std::span<const int> t, int cod) {
  std::vector<bool> hit(static_cast<std::size_t>(cod), false);
  for (int v : t) hit[static_cast<std::size_t>(v)] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
}

CheckStatus every_morphism(const FinCategory& c, const std::function<std::optional<json>(MorphismId)>& bad) {
  json failures = json::array();
  std::size_t n = 0;
  for (MorphismId f : c.morphisms()) {
    ++n;
    if (auto w = bad(f); w && failures.size() < 8) failures.push_back(*w);
  }
  json stats{{"morphisms", n}};
  if (!failures.empty()) return CheckStatus::fail({{"counterexamples", failures}}, stats);
  return {Status::pass, json(), stats};
}

CheckStatus finset_extensive(const Categories& cs) {
  const FinCategory& c = cs.get("finset4").category;
  Analysis a(c);
  return every_morphism(c, [&](MorphismId f) -> std::optional<json> {
    auto s = is_extensive_morphism(a, f);
    if (s.passed()) return std::nullopt;
    return json{{"morphism", c.morphism_name(f)}, {"status", to_json(s)}};
  });
}

CheckStatus pointed_kernel(const Categories& cs) {
  const BuiltCategory& b = cs.get("pointed3");
  const FinCategory& c = b.category;
  Analysis a(c);
  return every_morphism(c, [&](MorphismId f) -> std::optional<json> {
    const int base_dom = b.algebras[c.dom(f).index()].constant(0);
    const int base_cod = b.algebras[c.cod(f).index()].constant(0);
    const auto& t = b.tables[f.index()];
    const bool trivial_kernel =
        std::count(t.begin(), t.end(), base_cod) == 1 && t[static_cast<std::size_t>(base_dom)] == base_cod;
    const bool ext = is_extensive_morphism(a, f).passed();
    if (ext == trivial_kernel) return std::nullopt;
    return json{{"morphism", c.morphism_name(f)}, {"extensive", ext}, {"trivial_kernel", trivial_kernel}};
  });
}

CheckStatus chain_c2(const Categories& cs) {
  const FinCategory& c = cs.get("chain2").category;
  Analysis a(c);
  const MorphismId id0 = *c.find_morphism("id0");
  const CheckStatus s = check_c2(a, id0);
  const json expected{{"top_row", {"id0", "id0"}},
                      {"bottom_row", {"0le1", "id0"}},
                      {"verticals", {"0le1", "id0", "id0"}},
                      {"failing_squares", {"left"}}};
  json stats{{"c2", to_json(s)}};
  if (!s.failed()) return CheckStatus::fail({{"reason", "C2 holds for id0"}}, stats);
  const auto& ds = s.witness["diagrams"];
  if (std::find(ds.begin(), ds.end(), expected) == ds.end())
    return CheckStatus::fail({{"reason", "expected square missing from witness"}, {"expected", expected}}, stats);
  return {Status::pass, json(), stats};
}

CheckStatus lattice_surjections(const Categories& cs) {
  const BuiltCategory& b = cs.get("lattice4");
  const FinCategory& c = b.category;
  Analysis a(c);
  json failures = json::array();
  json inapplicable = json::array();
  std::size_t surjections = 0;
  for (MorphismId f : c.morphisms()) {
    if (!surjective(b.tables[f.index()], b.algebras[c.cod(f).index()].size)) continue;
    ++surjections;
    const CheckStatus s = is_coextensive_morphism(a, f);
    if (s.failed()) failures.push_back({{"morphism", c.morphism_name(f)}, {"status", to_json(s)}});
    if (s.status == Status::inapplicable) inapplicable.push_back({{"morphism", c.morphism_name(f)}, {"witness", s.witness}});
  }
  json stats{{"surjections", surjections}, {"inapplicable", inapplicable}};
  if (!failures.empty()) return CheckStatus::fail({{"counterexamples", failures}}, stats);
  return {Status::pass, json(), stats};
}

std::optional<MorphismId> lattice_diagonal(const BuiltCategory& b) {
  const FinAlgebra two = chain(AlgebraKind::lattice, 2);
  auto sq = b.find_object(product(two, two).algebra);
  auto pt = b.find_object(two);
  if (!sq || !pt) return std::nullopt;
  const FinAlgebra& s = b.algebras[sq->index()];
  // bottom and top of the square as meet and join of everything
  int bottom = 0, top = 0;
  for (int x = 1; x < s.size; ++x) {
    bottom = s.binary(1, bottom, x);
    top = s.binary(0, top, x);
  }
  const FinAlgebra& p = b.algebras[pt->index()];
  const int low = p.binary(1, 0, 1);
  std::vector<int> table(2);
  table[static_cast<std::size_t>(low)] = bottom;
  table[static_cast<std::size_t>(1 - low)] = top;
  return b.find_morphism(*pt, *sq, table);
}

CheckStatus lattice_split_mono(const Categories& cs) {
  const BuiltCategory& b = cs.get("lattice4");
  const FinCategory& c = b.category;
  Analysis a(c);
  const CategoryReport r = category_report(a, ReportMode::coextensive, MorphismClass::split_mono);
  // a point of the two-element chain, split by the map to the one-element lattice
  const FinAlgebra two = chain(AlgebraKind::lattice, 2);
  auto one = b.find_object(chain(AlgebraKind::lattice, 1));
  auto pt = b.find_object(two);
  std::optional<MorphismId> point;
  if (one && pt) point = b.find_morphism(*one, *pt, std::vector<int>{0});
  json stats{{"split_mono_report", to_json(r.verdict)}};
  if (auto diag = lattice_diagonal(b)) {
    stats["diagonal"] = c.morphism_name(*diag);
    stats["diagonal_status"] = to_json(is_coextensive_morphism(a, *diag));
  }
  if (!point) return CheckStatus::fail({{"reason", "point of the two-element chain not found"}}, stats);
  const CheckStatus s = is_coextensive_morphism(a, *point);
  stats["point"] = c.morphism_name(*point);
  stats["point_status"] = to_json(s);
  if (!r.verdict.failed() || !a.profile(*point).is_split_mono || !s.failed())
    return CheckStatus::fail({{"reason", "no failing split mono"}}, stats);
  return {Status::pass, json(), stats};
}

CheckStatus srp_examples(const Categories& cs) {
  json failures = json::array();
  json stats = json::object();
  for (const char* name : {"cpos3", "slat4"}) {
    Analysis a(cs.get(name).category);
    std::size_t n = 0;
    for (ObjectId x : a.category().objects()) {
      ++n;
      auto s = has_binary_srp(a, x);
      if (!s.passed()) failures.push_back({{"category", name}, {"object", a.category().object_name(x)}, {"status", to_json(s)}});
    }
    stats[name] = n;
  }
  const BuiltCategory& m = cs.get("monoid4");
  Analysis a(m.category);
  auto klein = m.find_object(product(cyclic_group(2), cyclic_group(2)).algebra);
  if (!klein) {
    failures.push_back({{"reason", "Klein four group missing"}});
  } else {
    auto s = has_binary_srp(a, *klein);
    stats["klein"] = to_json(s);
    if (!s.failed()) failures.push_back({{"object", m.category.object_name(*klein)}, {"expected", "no strict refinement"}});
  }
  if (!failures.empty()) return CheckStatus::fail({{"counterexamples", failures}}, stats);
  return {Status::pass, json(), stats};
}

CheckStatus transformation_monoid_example(const Categories& cs) {
  const BuiltCategory& m = cs.get("monoid4");
  const FinAlgebra t2 = transformation_monoid(2);
  json stats{{"center", center_of_monoid(t2)}};
  if (center_of_monoid(t2).size() != 1) return CheckStatus::fail({{"reason", "center is not trivial"}}, stats);
  auto x = m.find_object(t2);
  if (!x) return CheckStatus::fail({{"reason", "full transformation monoid missing"}}, stats);
  Analysis a(m.category);
  json failures = json::array();
  std::size_t projections = 0;
  for (const SpanDiagram& d : a.product_decompositions(*x, 2))
    for (MorphismId p : d.legs) {
      ++projections;
      auto s = is_coextensive_morphism(a, p);
      if (!s.passed()) failures.push_back({{"projection", m.category.morphism_name(p)}, {"status", to_json(s)}});
    }
  stats["projections"] = projections;
  if (!failures.empty()) return CheckStatus::fail({{"counterexamples", failures}}, stats);
  return {Status::pass, json(), stats};
}

CheckStatus duality(const Categories& cs) {
  json failures = json::array();
  json stats = json::object();
  for (const std::string& name : proposition_categories) {
    const FinCategory& c = cs.get(name).category;
    Analysis a(c);
    Analysis d(dual(c));
    for (MorphismId f : c.morphisms())
      if (is_coextensive_morphism(a, f).status != is_extensive_morphism(d, f).status && failures.size() < 8)
        failures.push_back({{"category", name}, {"morphism", c.morphism_name(f)}});
    stats[name] = c.morphism_count();
  }
  if (!failures.empty()) return CheckStatus::fail({{"counterexamples", failures}}, stats);
  return {Status::pass, json(), stats};
}

// Quotient table into the builder's stored (canonical) copy of its image.
std::optional<MorphismId> stored_surjection(const BuiltCategory& b, ObjectId dom, const Quotient& q) {
  auto obj = b.find_object(q.algebra);
  if (!obj) return std::nullopt;
  const auto relabel = canonical_form(q.algebra).relabel;
  std::vector<int> table;
  for (int v : q.map) table.push_back(relabel[static_cast<std::size_t>(v)]);
  return b.find_morphism(dom, *obj, table);
}

CheckStatus pushout_oracle(const Categories& cs) {
  json failures = json::array();
  json stats = json::object();
  for (const char* name : {"lattice4", "slat4"}) {
    const BuiltCategory& b = cs.get(name);
    const FinCategory& c = b.category;
    Analysis a(c);
    std::size_t pairs = 0;
    for (ObjectId x : c.objects()) {
      const FinAlgebra& alg = b.algebras[x.index()];
      const auto congs = congruence_lattice(alg);
      for (const Congruence& q : congs)
        for (const Congruence& p : congs) {
          ++pairs;
          const SurjectionPushout po = pushout_surjections(q, p, alg);
          auto fq = stored_surjection(b, x, po.by_q);
          auto fp = stored_surjection(b, x, po.by_p);
          auto target = b.find_object(po.algebra);
          auto cat = fq && fp ? a.pushout(*fq, *fp) : std::nullopt;
          bool agree = fq && fp && target && cat && cat->nadir == *target;
          if (agree) {
            // certify: the oracle legs, moved into the stored target, factor the categorical legs through an iso
            const auto rel = canonical_form(po.algebra).relabel;
            const auto rq = canonical_form(po.by_q.algebra).relabel;
            const auto rp = canonical_form(po.by_p.algebra).relabel;
            std::vector<int> oq(static_cast<std::size_t>(po.by_q.algebra.size));
            std::vector<int> op(static_cast<std::size_t>(po.by_p.algebra.size));
            for (std::size_t i = 0; i < po.from_q.size(); ++i) oq[static_cast<std::size_t>(rq[i])] = rel[static_cast<std::size_t>(po.from_q[i])];
            for (std::size_t i = 0; i < po.from_p.size(); ++i) op[static_cast<std::size_t>(rp[i])] = rel[static_cast<std::size_t>(po.from_p[i])];
            auto mq = b.find_morphism(c.cod(*fq), *target, oq);
            auto mp = b.find_morphism(c.cod(*fp), *target, op);
            bool certified = false;
            if (mq && mp)
              for (MorphismId h : c.hom(*target, cat->nadir))
                if (a.is_iso(h) && c.compose(h, *mq) == cat->legs[0] && c.compose(h, *mp) == cat->legs[1]) {
                  certified = true;
                  break;
                }
            agree = certified;
          }
          if (!agree && failures.size() < 8)
            failures.push_back({{"category", name},
                                {"object", c.object_name(x)},
                                {"q", q.block},
                                {"p", p.block},
                                {"categorical_pushout", cat ? json(c.object_name(cat->nadir)) : json()}});
          if (!agree) stats["disagreements"] = stats.value("disagreements", 0) + 1;
        }
    }
    stats[name] = pairs;
  }
  if (!failures.empty()) return CheckStatus::fail({{"counterexamples", failures}}, stats);
  return {Status::pass, json(), stats};
}

const std::vector<Example>& examples() {
  static const std::vector<Example> all{
      {"example-chain-c2", {"chain2"}, chain_c2},
      {"example-duality", proposition_categories, duality},
      {"example-finset-extensive", {"finset4"}, finset_extensive},
      {"example-lattice-split-mono", {"lattice4"}, lattice_split_mono},
      {"example-lattice-surjections", {"lattice4"}, lattice_surjections},
      {"example-pointed-kernel", {"pointed3"}, pointed_kernel},
      {"example-pushout-oracle", {"lattice4", "slat4"}, pushout_oracle},
      {"example-srp", {"cpos3", "slat4", "monoid4"}, srp_examples},
      {"example-transformation-monoid", {"monoid4"}, transformation_monoid_example},
  };
  return all;
}

// -------------------------------------------------------------------- units

struct Unit {
  std::function<std::vector<ReportEntry>()> run;
};

void run_units(std::vector<Unit>& units, std::vector<std::vector<ReportEntry>>& out, unsigned jobs) {
  out.assign(units.size(), {});
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < units.size(); i = next++) {
      try {
        out[i] = units[i].run();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(units.size())));
  std::vector<std::jthread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

bool is_proposition(const std::string& id) {
  const auto& cat = proposition_catalogue();
  return std::any_of(cat.begin(), cat.end(), [&](const PropositionInfo& p) { return p.id == id; });
}

bool is_identity(const std::string& id) {
  const auto& ids = identity_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace

std::vector<std::string> battery_ids() {
  std::vector<std::string> out;
  for (const auto& p : proposition_catalogue()) out.push_back(p.id);
  for (const auto& i : identity_ids()) out.push_back(i);
  for (const auto& e : examples()) out.push_back(e.id);
  return out;
}

std::vector<std::string> parse_suite(std::string_view suite) {
  std::vector<std::string> out;
  if (suite == "all") return battery_ids();
  if (suite == "2" || suite == "§2") {
    for (const auto& p : proposition_catalogue())
      if (p.group == "2") out.push_back(p.id);
    return out;
  }
  if (suite == "3" || suite == "§3") {
    for (const auto& p : proposition_catalogue())
      if (p.group == "3") out.push_back(p.id);
    for (const auto& i : identity_ids()) out.push_back(i);
    return out;
  }
  const auto known = battery_ids();
  std::size_t start = 0;
  while (start <= suite.size()) {
    const std::size_t end = std::min(suite.find(',', start), suite.size());
    std::string id(suite.substr(start, end - start));
    if (!id.empty()) {
      if (std::find(known.begin(), known.end(), id) == known.end())
        throw std::invalid_argument("unknown check id: " + id);
      if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    }
    start = end + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty suite selection");
  return out;
}

std::vector<ReportEntry> run_battery(const std::vector<std::string>& selection, const BatteryOptions& opt) {
  std::vector<std::string> props, idents;
  std::vector<const Example*> exs;
  for (const auto& id : selection) {
    if (is_proposition(id))
      props.push_back(id);
    else if (is_identity(id))
      idents.push_back(id);
    else if (auto it = std::find_if(examples().begin(), examples().end(), [&](const Example& e) { return e.id == id; });
             it != examples().end())
      exs.push_back(&*it);
    else
      throw std::invalid_argument("unknown check id: " + id);
  }

  Categories cats;
  if (!props.empty())
    for (const auto& n : proposition_categories) cats.require(n);
  if (!idents.empty())
    for (const auto& n : relation_categories) cats.require(n);
  for (const Example* e : exs)
    for (const auto& n : e->needs) cats.require(n);
  cats.build();

  std::vector<Unit> units;
  const SuiteOptions prop_opt{opt.sample_bound, opt.seed};
  if (!props.empty())
    for (const auto& name : proposition_categories)
      units.push_back({[&cats, &props, prop_opt, name] {
        Analysis a(cats.get(name).category);
        std::vector<ReportEntry> out;
        // one shared memo per category
        for (const auto& id : props) {
          const auto t0 = Clock::now();
          CheckStatus s = run_proposition(a, id, prop_opt);
          out.push_back({id + "@" + name, std::move(s), ms_since(t0)});
        }
        return out;
      }});

  IdentityOptions id_opt;
  id_opt.seed = opt.seed;
  id_opt.max_relation_size = opt.max_relation_size;
  auto identity_entries = [](const IdentitySuite& s, const std::string& model, double ms) {
    std::vector<ReportEntry> out{{"regularity@" + model, s.regularity, 0.0}};
    for (const auto& r : s.identities) out.push_back({r.id + "@" + model, r.status, 0.0});
    for (auto& e : out) e.timing_ms = ms / static_cast<double>(out.size());
    return out;
  };
  if (!idents.empty()) {
    for (const auto& name : relation_categories)
      units.push_back({[&cats, &idents, id_opt, name, identity_entries] {
        const auto t0 = Clock::now();
        Analysis a(cats.get(name).category);
        RelationCalculus rc(a);
        return identity_entries(identity_suite(rc, id_opt, idents), name, ms_since(t0));
      }});
    units.push_back({[&cats, &idents, id_opt, identity_entries] {
      const auto t0 = Clock::now();
      const BuiltCategory& b = cats.get("finset3");
      Analysis a(b.category);
      return identity_entries(identity_suite(b, a, id_opt, idents), "finset3-concrete", ms_since(t0));
    }});
  }
  for (const Example* e : exs)
    units.push_back({[&cats, e] {
      const auto t0 = Clock::now();
      CheckStatus s = e->run(cats);
      return std::vector<ReportEntry>{{e->id, std::move(s), ms_since(t0)}};
    }});

  std::vector<std::vector<ReportEntry>> results;
  run_units(units, results, opt.jobs);
  std::vector<ReportEntry> out;
  for (auto& r : results)
    for (auto& e : r) out.push_back(std::move(e));
  return out;
}

}  // namespace extmorph::cli
