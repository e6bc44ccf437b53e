// Acceptance battery: one line per criterion. Exit status 0 when every
// criterion passes, or fails only as a pinned known deviation.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "extmorph/propositions.hpp"
#include "extmorph/relcalc.hpp"
#include "support.hpp"

#ifndef EXTMORPH_CLI_PATH
#define EXTMORPH_CLI_PATH ""
#endif

using namespace extmorph;
using namespace testing_support;
using nlohmann::json;

namespace {

// Pinned tolerances.
constexpr std::size_t allowed_failures = 0;
constexpr std::size_t allowed_mismatches = 0;
constexpr double runtime_budget_s = 15.0 * 60.0;
constexpr std::uint64_t seed = 7;
constexpr int max_relation_size = 9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string name;
  std::function<Outcome()> run;
  // Non-empty only for a criterion shown unattainable as stated (see the decisions ledger).
  std::string known_deviation = {};
};

std::string str(std::size_t n) { return std::to_string(n); }

// ------------------------------------------------------------ test oracles

bool split_mono_oracle(const FinCategory& c, MorphismId m) {
  for (MorphismId r : c.hom(c.cod(m), c.dom(m)))
    if (c.compose(r, m) == c.identity(c.dom(m))) return true;
  return false;
}

using Pairs = std::set<std::pair<int, int>>;

Pairs relation_pairs(const BuiltCategory& b, const Relation& r) {
  Pairs p;
  const auto& t1 = b.tables[r.first.index()];
  const auto& t2 = b.tables[r.second.index()];
  for (std::size_t e = 0; e < t1.size(); ++e) p.emplace(t1[e], t2[e]);
  return p;
}

Pairs compose_pairs(const Pairs& r, const Pairs& s) {
  Pairs out;
  for (auto [x, y] : r)
    for (auto [y2, z] : s)
      if (y == y2) out.emplace(x, z);
  return out;
}

std::size_t middle_triples(const Pairs& r, const Pairs& s) {
  std::size_t n = 0;
  for (auto [x, y] : r)
    for (auto [y2, z] : s) n += y == y2;
  return n;
}

const BuiltCategory& dual_finset3() {
  static const BuiltCategory b = [] {
    BuiltCategory d = finset(3);
    d.category = dual(d.category);
    return d;
  }();
  return b;
}

const BuiltCategory& z2() {
  static const BuiltCategory b = monoid_category(cyclic_group(2));
  return b;
}

std::vector<std::pair<std::string, const BuiltCategory*>> generated_categories() {
  return {{"finset3", &finset(3)},
          {"finset4", &finset(4)},
          {"dual-finset3", &dual_finset3()},
          {"pointed3", &built(AlgebraKind::pointed_set, 3)},
          {"poset3", &built(AlgebraKind::poset, 3)},
          {"cpos3", &built(AlgebraKind::connected_poset, 3)},
          {"chain2", &chain2()},
          {"lattice4", &built(AlgebraKind::lattice, 4)},
          {"slat4", &built(AlgebraKind::semilattice, 4)},
          {"monoid4", &built(AlgebraKind::monoid, 4)},
          {"z2", &z2()}};
}

// ---------------------------------------------------------------- criteria

Outcome finset_extensivity() {
  const FinCategory& c = finset(4).category;
  Analysis a(c);
  std::size_t failures = 0;
  for (MorphismId f : c.morphisms()) failures += !is_extensive_morphism(a, f).passed();
  return {failures <= allowed_failures && c.morphism_count() == 499,
          str(c.morphism_count()) + " morphisms, " + str(failures) + " not extensive"};
}

Outcome pointed_characterisation() {
  const BuiltCategory& b = built(AlgebraKind::pointed_set, 3);
  const FinCategory& c = b.category;
  Analysis a(c);
  std::size_t mismatches = 0, trivial = 0;
  for (MorphismId f : c.morphisms()) {
    const int base_dom = b.algebras[c.dom(f).index()].constant(0);
    const int base_cod = b.algebras[c.cod(f).index()].constant(0);
    std::vector<int> preimage;
    const auto& t = b.tables[f.index()];
    for (std::size_t x = 0; x < t.size(); ++x)
      if (t[x] == base_cod) preimage.push_back(static_cast<int>(x));
    const bool expect = preimage == std::vector<int>{base_dom};
    trivial += expect;
    mismatches += is_extensive_morphism(a, f).passed() != expect;
  }
  return {mismatches <= allowed_mismatches && trivial > 0,
          str(c.morphism_count()) + " morphisms, " + str(trivial) + " with trivial basepoint preimage, " +
              str(mismatches) + " mismatches"};
}

Outcome golden_counterexample() {
  const FinCategory& c = chain2().category;
  Analysis a(c);
  const CheckStatus s = check_c2(a, morphism(c, "id0"));
  // 0 = 0 x 0 over 0 = 1 x 0 with id0 down the middle: the left square is not a pushout
  const json expected{{"top_row", {"id0", "id0"}},
                      {"bottom_row", {"0le1", "id0"}},
                      {"verticals", {"0le1", "id0", "id0"}},
                      {"failing_squares", {"left"}}};
  if (!s.failed()) return {false, "C2(id0) = " + std::string(to_string(s.status))};
  const auto& ds = s.witness["diagrams"];
  const bool found = std::find(ds.begin(), ds.end(), expected) != ds.end();
  return {found, "C2(id0) = fail, expected square " + std::string(found ? "present" : "missing") + " among " +
                     str(ds.size()) + " failing diagrams"};
}

Outcome fraser_horn() {
  const BuiltCategory& b = build_category({AlgebraKind::lattice, 4, true, true, true, std::nullopt});
  const FinCategory& c = b.category;
  Analysis a(c);
  std::size_t surj = 0, failures = 0;
  std::vector<std::string> inapplicable;
  for (MorphismId f : c.morphisms()) {
    if (!surjective(b.tables[f.index()], carrier(b, c.cod(f)))) continue;
    ++surj;
    const CheckStatus s = is_coextensive_morphism(a, f);
    failures += s.failed();
    if (s.status == Status::inapplicable) inapplicable.push_back(c.morphism_name(f));
  }
  std::string items = inapplicable.empty() ? "none" : "";
  for (const auto& n : inapplicable) items += (items.empty() ? "" : ",") + n;
  return {failures <= allowed_failures && surj > 0,
          str(surj) + " surjections, " + str(failures) + " failures, inapplicable: " + items};
}

Outcome lattice_split_monos() {
  const BuiltCategory& b = built(AlgebraKind::lattice, 4);
  const FinCategory& c = b.category;
  Analysis a(c);
  std::size_t split = 0;
  std::vector<std::string> failing;
  json first_witness;
  for (MorphismId m : c.morphisms()) {
    if (!split_mono_oracle(c, m)) continue;
    ++split;
    const CheckStatus s = is_coextensive_morphism(a, m);
    if (s.failed()) {
      if (first_witness.is_null()) first_witness = s.witness;
      failing.push_back(c.morphism_name(m));
    }
  }
  // the diagonal of the square, for the record
  const FinAlgebra two = chain(AlgebraKind::lattice, 2);
  std::string diagonal = "not found";
  if (auto sq = b.find_object(product(two, two).algebra)) {
    const FinAlgebra& s = b.algebras[sq->index()];
    int bottom = 0, top = 0;
    for (int x = 1; x < s.size; ++x) {
      bottom = s.binary(1, bottom, x);
      top = s.binary(0, top, x);
    }
    const auto pt = object(c, "L2");
    const int low = b.algebras[pt.index()].binary(1, 0, 1);
    std::vector<int> t(2);
    t[static_cast<std::size_t>(low)] = bottom;
    t[static_cast<std::size_t>(1 - low)] = top;
    if (auto d = b.find_morphism(pt, *sq, t))
      diagonal = c.morphism_name(*d) + " " + std::string(to_string(is_coextensive_morphism(a, *d).status));
  }
  const bool ok = !failing.empty() && !first_witness.is_null();
  return {ok, str(failing.size()) + " of " + str(split) + " split monos fail (first " +
                  (failing.empty() ? std::string("-") : failing.front()) + " with C2 witness); diagonal " + diagonal};
}

Outcome strict_refinement() {
  std::size_t checked = 0, failures = 0;
  for (const BuiltCategory* b : {&built(AlgebraKind::connected_poset, 3), &built(AlgebraKind::semilattice, 4)}) {
    Analysis a(b->category);
    for (ObjectId x : b->category.objects()) {
      ++checked;
      failures += !has_binary_srp(a, x).passed();
    }
  }
  const BuiltCategory& m = built(AlgebraKind::monoid, 4);
  Analysis am(m.category);
  auto klein = m.find_object(product(cyclic_group(2), cyclic_group(2)).algebra);
  const bool klein_fails = klein && has_binary_srp(am, *klein).failed();

  // full transformation monoid on two points: center by brute force
  const FinAlgebra t2 = transformation_monoid(2);
  std::size_t central = 0;
  for (int x = 0; x < t2.size; ++x) {
    bool commutes = true;
    for (int y = 0; y < t2.size; ++y) commutes = commutes && t2.binary(1, x, y) == t2.binary(1, y, x);
    central += commutes;
  }
  auto t = m.find_object(t2);
  std::size_t projections = 0, projection_failures = 0;
  if (t)
    for (const SpanDiagram& d : am.product_decompositions(*t, 2))
      for (MorphismId p : d.legs) {
        ++projections;
        projection_failures += !is_coextensive_morphism(am, p).passed();
      }
  const bool ok = failures <= allowed_failures && klein_fails && central == 1 && t && projection_failures == 0;
  return {ok, str(checked) + " poset/semilattice objects, " + str(failures) + " without SRP; Klein four " +
                  (klein_fails ? "fails" : "does not fail") + "; T2 center size " + str(central) + ", " +
                  str(projections) + " projections, " + str(projection_failures) + " not coextensive"};
}

Outcome extremal_characterisation() {
  std::size_t objects = 0, gated = 0, disagreements = 0;
  std::string first;
  for (const auto& [name, b] : generated_categories()) {
    const FinCategory& c = b->category;
    Analysis a(c);
    for (ObjectId x : c.objects()) {
      bool kernels = true;
      std::vector<MorphismId> projections;
      for (const SpanDiagram& d : a.product_decompositions(x, 2))
        for (MorphismId p : d.legs) {
          projections.push_back(p);
          for (ObjectId y : c.objects())
            for (MorphismId f : c.hom(c.cod(p), y)) kernels = kernels && a.kernel_pair(f).has_value();
        }
      if (!kernels) {
        ++gated;
        continue;
      }
      ++objects;
      const bool by_definition = is_coextensive_morphism(a, c.identity(x)).passed();
      const bool by_classification = std::all_of(projections.begin(), projections.end(),
                                                  [&](MorphismId p) { return a.profile(p).is_extremal_epi; });
      if (by_definition != by_classification) {
        ++disagreements;
        if (first.empty()) first = name + ":" + c.object_name(x);
      }
    }
  }
  return {disagreements <= allowed_mismatches && objects > 0,
          str(objects) + " objects with kernel pairs, " + str(gated) + " gated out, " + str(disagreements) +
              " disagreements" + (first.empty() ? "" : " (first " + first + ")")};
}

Outcome composition_closure() {
  std::size_t pairs = 0, failures = 0;
  for (const BuiltCategory* b : {&finset(4), &built(AlgebraKind::pointed_set, 3)}) {
    const FinCategory& c = b->category;
    Analysis a(c);
    std::vector<bool> ext(c.morphism_count());
    for (MorphismId f : c.morphisms()) ext[f.index()] = is_extensive_morphism(a, f).passed();
    for (MorphismId f : c.morphisms()) {
      if (!ext[f.index()]) continue;
      for (ObjectId z : c.objects())
        for (MorphismId g : c.hom(c.cod(f), z))
          if (ext[g.index()]) {
            ++pairs;
            failures += !ext[c.compose(g, f).index()];
          }
    }
  }
  return {failures <= allowed_failures && pairs > 0,
          str(pairs) + " composable extensive pairs, " + str(failures) + " non-extensive composites"};
}

Outcome relation_suite() {
  const BuiltCategory& b = finset(3);
  Analysis a(b.category);
  IdentityOptions opt;
  opt.seed = seed;
  opt.max_relation_size = max_relation_size;
  std::vector<std::string> eight;
  for (const auto& id : identity_ids())
    if (id.rfind("lemma-", 0) != 0) eight.push_back(id);
  const IdentitySuite suite = identity_suite(b, a, opt, eight);
  std::size_t passed = 0;
  bool exhaustive = true;
  for (const auto& r : suite.identities) {
    passed += r.status.passed();
    exhaustive = exhaustive && r.status.stats.value("sampled", 0) == 0;
  }

  // categorical composition against pair sets
  RelationCalculus rc(a);
  const FinCategory& c = b.category;
  std::size_t agree = 0, instances = 0, missing = 0, unexplained = 0;
  for (ObjectId x : c.objects())
    for (ObjectId y : c.objects())
      for (ObjectId z : c.objects()) {
        const auto rs = rc.relations(x, y);
        const auto ss = rc.relations(y, z);
        for (const Relation& r : rs)
          for (const Relation& s : ss) {
            const Pairs pr = relation_pairs(b, r), ps = relation_pairs(b, s);
            auto comp = rc.rel_compose(r, s);
            if (!comp) {
              ++missing;
              // only the budget may stop it: the pullback or X x Z exceeds 3 elements
              const bool budget = middle_triples(pr, ps) > 3 || carrier(b, x) * carrier(b, z) > 3;
              unexplained += !budget;
              continue;
            }
            ++instances;
            agree += relation_pairs(b, *comp) == compose_pairs(pr, ps);
          }
      }
  const bool ok = suite.regularity.passed() && passed == 8 && eight.size() == 8 && exhaustive &&
                  agree == instances && instances > 0 && unexplained == 0;
  return {ok, str(passed) + "/8 identities pass" + (exhaustive ? " exhaustively" : " (sampled)") +
                  "; rel_compose agrees on " + str(agree) + "/" + str(instances) + " instances, " + str(missing) +
                  " beyond budget, " + str(unexplained) + " unexplained"};
}

Outcome eq_of_projection() {
  const BuiltCategory& b = finset(3);
  const FinCategory& c = b.category;
  Analysis a(c);
  RelationCalculus rc(a);
  std::size_t products = 0, categorical = 0, mismatches = 0;
  for (ObjectId x : c.objects())
    for (const SpanDiagram& d : a.product_decompositions(x, 2)) {
      ++products;
      const MorphismId p1 = d.legs[0], p2 = d.legs[1];
      // concrete: kernel of p1 versus Delta x Nabla, as pair sets on X
      const auto& t1 = b.tables[p1.index()];
      const auto& t2 = b.tables[p2.index()];
      Pairs kernel, expected;
      for (std::size_t u = 0; u < t1.size(); ++u)
        for (std::size_t v = 0; v < t1.size(); ++v) {
          if (t1[u] == t1[v]) kernel.emplace(u, v);
          const bool in_delta = t1[u] == t1[v];
          const bool in_nabla = t2[u] >= 0 && t2[v] >= 0;
          if (in_delta && in_nabla) expected.emplace(u, v);
        }
      mismatches += kernel != expected;
      // categorical, where X x X is inside the budget
      auto eq = rc.eq_of(p1);
      auto delta = rc.delta(c.cod(p1));
      auto nabla = rc.nabla(c.cod(p2));
      if (!eq || !delta || !nabla) continue;
      auto prod = rc.product_relation(*delta, *nabla, d);
      if (!prod) continue;
      ++categorical;
      mismatches += !(*eq == *prod);
    }
  return {mismatches <= allowed_mismatches && products > 0 && categorical > 0,
          str(products) + " certified products, " + str(categorical) + " compared as subobject classes, " +
              str(mismatches) + " mismatches"};
}

Outcome barr_exact() {
  auto sides = [](const BuiltCategory& b) {
    Analysis a(b.category);
    RelationCalculus rc(a);
    const CheckStatus s = barr_exact_check(rc);
    return std::tuple{s.status, std::string(s.stats["split_monos_coextensive"]["status"]),
                      std::string(s.stats["coextensive"]["status"])};
  };
  const auto [fs, fsplit, ffull] = sides(finset(3));
  const auto [ls, lsplit, lfull] = sides(built(AlgebraKind::lattice, 4));
  const bool sets_ok = fs == Status::pass && fsplit == "pass" && ffull == "pass";
  const bool lattice_ok = ls == Status::pass && lsplit == "fail" && lfull == "fail";
  return {sets_ok && lattice_ok, "FinSet<=3: check " + std::string(to_string(fs)) + ", split monos " + fsplit +
                                     ", coextensive " + ffull + "; Lat4: check " + std::string(to_string(ls)) +
                                     ", split monos " + lsplit + ", coextensive " + lfull};
}

Outcome duality() {
  std::size_t morphisms = 0, mismatches = 0;
  for (const auto& [name, b] : generated_categories()) {
    const FinCategory& c = b->category;
    Analysis a(c);
    Analysis d(dual(c));
    for (MorphismId f : c.morphisms()) {
      ++morphisms;
      mismatches += is_coextensive_morphism(a, f).status != is_extensive_morphism(d, f).status;
    }
  }
  return {mismatches <= allowed_mismatches, str(morphisms) + " morphisms in " + str(generated_categories().size()) +
                                                " categories, " + str(mismatches) + " mismatches"};
}

// The builder stores canonical copies; move a quotient map onto the stored target.
std::optional<MorphismId> stored(const BuiltCategory& b, ObjectId dom, const FinAlgebra& target,
                                 const std::vector<int>& map) {
  auto obj = b.find_object(target);
  if (!obj) return std::nullopt;
  const auto relabel = canonical_form(target).relabel;
  std::vector<int> t;
  for (int v : map) t.push_back(relabel[static_cast<std::size_t>(v)]);
  return b.find_morphism(dom, *obj, t);
}

Outcome pushout_oracle() {
  std::size_t pairs = 0, disagreements = 0;
  for (const BuiltCategory* b : {&built(AlgebraKind::lattice, 4), &built(AlgebraKind::semilattice, 4)}) {
    const FinCategory& c = b->category;
    Analysis a(c);
    for (ObjectId x : c.objects()) {
      const FinAlgebra& alg = b->algebras[x.index()];
      const auto congs = congruence_lattice(alg);
      for (const Congruence& q : congs)
        for (const Congruence& p : congs) {
          ++pairs;
          const SurjectionPushout po = pushout_surjections(q, p, alg);
          auto fq = stored(*b, x, po.by_q.algebra, po.by_q.map);
          auto fp = stored(*b, x, po.by_p.algebra, po.by_p.map);
          auto cat = fq && fp ? a.pushout(*fq, *fp) : std::nullopt;
          bool certified = false;
          if (cat) {
            // oracle legs A/q -> P and A/p -> P, as maps into the stored copy of P
            auto target = b->find_object(po.algebra);
            const auto rel = canonical_form(po.algebra).relabel;
            const auto rq = canonical_form(po.by_q.algebra).relabel;
            const auto rp = canonical_form(po.by_p.algebra).relabel;
            std::vector<int> lq(po.from_q.size()), lp(po.from_p.size());
            for (std::size_t i = 0; i < po.from_q.size(); ++i)
              lq[static_cast<std::size_t>(rq[i])] = rel[static_cast<std::size_t>(po.from_q[i])];
            for (std::size_t i = 0; i < po.from_p.size(); ++i)
              lp[static_cast<std::size_t>(rp[i])] = rel[static_cast<std::size_t>(po.from_p[i])];
            auto mq = target ? b->find_morphism(c.cod(*fq), *target, lq) : std::nullopt;
            auto mp = target ? b->find_morphism(c.cod(*fp), *target, lp) : std::nullopt;
            if (mq && mp)
              for (MorphismId h : c.hom(*target, cat->nadir))
                if (a.is_iso(h) && c.compose(h, *mq) == cat->legs[0] && c.compose(h, *mp) == cat->legs[1]) {
                  certified = true;
                  break;
                }
          }
          disagreements += !certified;
        }
    }
  }
  return {disagreements <= allowed_mismatches && pairs > 0,
          str(pairs) + " congruence pairs, " + str(disagreements) + " disagreements"};
}

std::string read_all(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json strip_timings(json r) {
  r.erase("timing_ms");
  r.erase("report_digest");
  for (auto& e : r["entries"]) e.erase("timing_ms");
  return r;
}

Outcome determinism() {
  const std::string cli = EXTMORPH_CLI_PATH;
  if (cli.empty()) return {false, "command-line tool not built"};
  const std::string dir = std::filesystem::temp_directory_path().string();
  const std::string r1 = dir + "/extmorph-acceptance-1.json";
  const std::string r2 = dir + "/extmorph-acceptance-2.json";
  auto run = [&](const std::string& report, int jobs) {
    const std::string cmd = "\"" + cli + "\" verify-paper --suite all --seed " + std::to_string(seed) + " --jobs " +
                            std::to_string(jobs) + " --report \"" + report + "\" > /dev/null";
    return std::system(cmd.c_str());
  };
  const int e1 = run(r1, 1);
  const int e2 = run(r2, 4);
  json j1, j2;
  try {
    j1 = json::parse(read_all(r1));
    j2 = json::parse(read_all(r2));
  } catch (const json::exception& e) {
    return {false, std::string("unreadable report: ") + e.what()};
  }
  const std::string d1 = strip_timings(j1).dump();
  const std::string d2 = strip_timings(j2).dump();
  const bool same = d1 == d2 && j1["report_digest"] == j2["report_digest"];
  std::filesystem::remove(r1);
  std::filesystem::remove(r2);
  return {same && e1 == 0 && e2 == 0,
          std::string(same ? "byte-identical" : "different") + " digest-relevant content (" + str(d1.size()) +
              " bytes, digest " + j1.value("report_digest", std::string("?")).substr(0, 16) + "), " +
              str(j1["summary"].value("fail", 0)) + " fails"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "finset-extensive", finset_extensivity},
      {2, "pointed-kernel", pointed_characterisation},
      {3, "golden-c2-square", golden_counterexample},
      {4, "lattice-surjections-coextensive", fraser_horn},
      {5, "lattice-split-mono-fails", lattice_split_monos},
      {6, "strict-refinement-examples", strict_refinement},
      {7, "extremal-projections", extremal_characterisation},
      {8, "composition-closure", composition_closure},
      {9, "relation-identities", relation_suite},
      {10, "eq-of-projection", eq_of_projection},
      {11, "barr-exact-biconditional", barr_exact,
       "Set has split monos that are not coextensive (S1 -> S2) and is not coextensive, so both sides fail on "
       "FinSet<=3; the biconditional itself holds"},
      {12, "duality", duality},
      {13, "pushout-oracle", pushout_oracle},
      {14, "determinism", determinism},
  };
  const auto start = std::chrono::steady_clock::now();
  int unexpected = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string tag = o.pass ? "PASS" : "FAIL";
    if (!o.pass && !c.known_deviation.empty()) tag = "FAIL (known deviation)";
    if (!o.pass && c.known_deviation.empty()) ++unexpected;
    std::cout << "[" << tag << "] " << (c.number < 10 ? " " : "") << c.number << " " << c.name << ": " << o.detail;
    if (!o.pass && !c.known_deviation.empty()) std::cout << " | " << c.known_deviation;
    if (o.pass && !c.known_deviation.empty()) std::cout << " | known deviation no longer reproduces";
    std::cout << " [" << static_cast<int>(secs * 1000) << " ms]" << std::endl;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_budget = total <= runtime_budget_s;
  std::cout << "total " << static_cast<int>(total) << " s (budget " << static_cast<int>(runtime_budget_s) << " s)"
            << (in_budget ? "" : " EXCEEDED") << ", unexpected failures: " << unexpected << std::endl;
  return unexpected == 0 && in_budget ? 0 : 1;
}
