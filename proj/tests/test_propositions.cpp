#include <doctest.h>

#include <set>

#include "extmorph/propositions.hpp"
#include "support.hpp"

using namespace extmorph;
using namespace testing_support;
using nlohmann::json;

namespace {

std::map<std::string, CheckStatus> run_all(const FinCategory& c, const SuiteOptions& opt = {}) {
  Analysis a(c);
  std::map<std::string, CheckStatus> out;
  for (auto& [id, s] : proposition_suite(a, {}, opt)) out.emplace(id, s);
  return out;
}

void no_failures(const std::map<std::string, CheckStatus>& results) {
  for (const auto& [id, s] : results) {
    CAPTURE(id);
    CAPTURE(to_json(s).dump());
    CHECK_FALSE(s.failed());
    if (s.status != Status::pass) CHECK_FALSE(s.witness.is_null());
  }
}

}  // namespace

TEST_CASE("catalogue ids are unique and stable") {
  const auto& cat = proposition_catalogue();
  CHECK(cat.size() == 22);
  std::set<std::string> ids;
  for (const auto& p : cat) {
    ids.insert(p.id);
    CHECK((p.group == "2" || p.group == "3"));
  }
  CHECK(ids.size() == cat.size());
  CHECK(cat.front().id == "prop-composite");
  CHECK(cat.back().id == "thm-barr-exact");
}

TEST_CASE("unknown ids throw") {
  Analysis a(chain2().category);
  CHECK_THROWS_AS(run_proposition(a, "prop-nonexistent"), std::invalid_argument);
  const std::vector<std::string> bad{"prop-composite", "nope"};
  CHECK_THROWS_AS(proposition_suite(a, bad), std::invalid_argument);
}

TEST_CASE("selection keeps catalogue order") {
  Analysis a(chain2().category);
  const std::vector<std::string> sel{"thm-barr-exact", "prop-composite"};
  auto r = proposition_suite(a, sel);
  REQUIRE(r.size() == 2);
  CHECK(r[0].first == "prop-composite");
  CHECK(r[1].first == "thm-barr-exact");
}

TEST_CASE("no proposition fails on the generated categories") {
  SUBCASE("sets") { no_failures(run_all(finset(3).category)); }
  SUBCASE("dual sets") { no_failures(run_all(dual(finset(3).category))); }
  SUBCASE("pointed sets") { no_failures(run_all(built(AlgebraKind::pointed_set, 3).category)); }
  SUBCASE("chain") { no_failures(run_all(chain2().category)); }
  SUBCASE("lattices") { no_failures(run_all(built(AlgebraKind::lattice, 4).category)); }
  SUBCASE("connected posets") { no_failures(run_all(built(AlgebraKind::connected_poset, 3).category)); }
  SUBCASE("semilattices") { no_failures(run_all(built(AlgebraKind::semilattice, 4).category)); }
  SUBCASE("cyclic group") { no_failures(run_all(monoid_category(cyclic_group(2)).category)); }
}

TEST_CASE("composites of extensive morphisms") {
  for (const BuiltCategory* b : {&finset(4), &built(AlgebraKind::pointed_set, 3)}) {
    const FinCategory& c = b->category;
    Analysis a(c);
    // oracle: count composable extensive pairs directly
    std::vector<bool> ext(c.morphism_count());
    for (MorphismId f : c.morphisms()) ext[f.index()] = is_extensive_morphism(a, f).passed();
    std::size_t pairs = 0;
    for (MorphismId f : c.morphisms())
      for (MorphismId g : c.morphisms())
        if (ext[f.index()] && ext[g.index()] && c.dom(g) == c.cod(f)) {
          ++pairs;
          CHECK(ext[c.compose(g, f).index()]);
        }
    auto s = run_proposition(a, "prop-composite");
    CHECK(s.passed());
    CHECK(s.stats["instances"] == pairs);
  }
}

TEST_CASE("every set map is extensive so the composite check covers all pairs") {
  Analysis a(finset(4).category);
  auto s = run_proposition(a, "prop-composite");
  CHECK(s.stats["extensive_morphisms"] == 499);
  CHECK(s.stats["instances"] == 133799);
}

TEST_CASE("extremal projections match identity coextensivity") {
  const std::vector<const BuiltCategory*> cats{&finset(3), &built(AlgebraKind::pointed_set, 3), &chain2(),
                                               &built(AlgebraKind::lattice, 4),
                                               &built(AlgebraKind::connected_poset, 3),
                                               &built(AlgebraKind::semilattice, 4)};
  for (const BuiltCategory* b : cats) {
    const FinCategory& c = b->category;
    Analysis a(c);
    auto s = run_proposition(a, "prop-extremal-projections");
    CAPTURE(to_json(s).dump());
    CHECK(s.passed());
    CHECK(s.stats["converse_instances"].get<int>() >= 1);
  }
}

TEST_CASE("isos satisfy C2 exactly when products reflect isos") {
  Analysis sets(finset(3).category);
  auto s = run_proposition(sets, "prop-iso-c2-product");
  REQUIRE(s.passed());
  // both sides fail on sets: the empty set absorbs products
  CHECK(s.stats["isos_satisfy_C2"]["holds"] == false);
  CHECK(s.stats["products_reflect_isos"]["holds"] == false);

  Analysis opp(dual(finset(3).category));
  auto d = run_proposition(opp, "prop-iso-c2-product");
  REQUIRE(d.passed());
  CHECK(d.stats["isos_satisfy_C2"]["holds"] == true);
  CHECK(d.stats["products_reflect_isos"]["holds"] == true);
}

TEST_CASE("conservativity mirrors the iso-C2 statement under duality") {
  Analysis sets(finset(3).category);
  auto s = run_proposition(sets, "prop-conservative");
  REQUIRE(s.passed());
  CHECK(s.stats["identities_extensive"]["holds"] == true);

  Analysis opp(dual(finset(3).category));
  auto d = run_proposition(opp, "prop-conservative");
  REQUIRE(d.passed());
  CHECK(d.stats["identities_extensive"]["holds"] == false);
}

TEST_CASE("C1 with C2 at the codomain identity gives coextensive, not extensive") {
  Analysis a(dual(finset(3).category));
  auto s = run_proposition(a, "prop-c1-identity-c2");
  REQUIRE(s.passed());
  CHECK(s.stats["instances"] == 60);
  CHECK(s.stats["literal_reading"]["extensive_failures"] == 43);
}

TEST_CASE("hypothesis-gated propositions report what is missing") {
  Analysis lat(built(AlgebraKind::lattice, 4).category);
  auto crisp = run_proposition(lat, "prop-crisp-extensive");
  CHECK(crisp.status == Status::inapplicable);
  CHECK(crisp.witness["hypothesis"] == "initial object");

  Analysis sets(finset(3).category);
  auto cod = run_proposition(sets, "lemma-codisjoint");
  CHECK(cod.status == Status::inapplicable);
  CHECK(cod.witness["projection"] == "S0>S1:");

  auto conv = run_proposition(sets, "prop-coextensive-converse");
  CHECK(conv.status == Status::inapplicable);
  CHECK(conv.witness["hypothesis"] == "binary products");

  Analysis z2(monoid_category(cyclic_group(2)).category);
  auto barr = run_proposition(z2, "thm-barr-exact");
  CHECK(barr.status == Status::inapplicable);
}

TEST_CASE("disjoint coproducts and crisp extensivity on sets") {
  Analysis a(finset(4).category);
  CHECK(run_proposition(a, "prop-inclusions-regular-mono").passed());
  auto crisp = run_proposition(a, "prop-crisp-extensive");
  CHECK(crisp.passed());
  CHECK(crisp.stats["instances"] == 499);
  auto cor = run_proposition(a, "cor-inclusions-extensive");
  CHECK(cor.passed());
  CHECK(cor.stats["inclusions_extensive"]["holds"] == true);
  CHECK(run_proposition(a, "prop-pullback-stable").passed());
}

TEST_CASE("common coequaliser lemma: exhaustive on small categories, seeded otherwise") {
  Analysis chain(chain2().category);
  auto small = run_proposition(chain, "lemma-common-coequaliser");
  CHECK(small.passed());
  CHECK(small.stats["sampled"] == false);
  CHECK(small.stats["candidate_triples"] == 7);

  Analysis sets(finset(3).category);
  SuiteOptions opt{500, 11};
  auto first = run_proposition(sets, "lemma-common-coequaliser", opt);
  auto second = run_proposition(sets, "lemma-common-coequaliser", opt);
  CHECK(first.passed());
  CHECK(first.stats["sampled"] == true);
  CHECK(to_json(first).dump() == to_json(second).dump());
  CHECK(first.stats["instances"].get<int>() > 0);
}

TEST_CASE("strict refinement follows from coextensive projections") {
  for (const BuiltCategory* b : {&built(AlgebraKind::connected_poset, 3), &built(AlgebraKind::semilattice, 4)}) {
    Analysis a(b->category);
    auto bin = run_proposition(a, "prop-srp-binary");
    CHECK(bin.passed());
    CHECK(bin.stats["converse_hypotheses"]["products_codisjoint"] == true);
    CHECK(run_proposition(a, "thm-srp-finite").passed());
  }
}

TEST_CASE("suite shares memo across propositions without changing results") {
  const FinCategory& c = built(AlgebraKind::pointed_set, 3).category;
  auto together = run_all(c);
  for (const auto& info : proposition_catalogue()) {
    Analysis fresh(c);
    auto alone = run_proposition(fresh, info.id);
    CAPTURE(info.id);
    CHECK(to_json(alone).dump() == to_json(together.at(info.id)).dump());
  }
}
