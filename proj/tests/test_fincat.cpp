#include <doctest.h>

#include <algorithm>

#include "extmorph/category_json.hpp"
#include "extmorph/classify.hpp"
#include "support.hpp"

using namespace extmorph;
using namespace testing_support;

namespace {

CategoryDescription terminal_description() {
  CategoryDescription d;
  d.objects = {"*"};
  d.morphisms = {{"id", "*", "*"}};
  d.identities = {{"*", "id"}};
  d.composition = {{"id", "id", "id"}};
  return d;
}

// Oracle: cancellation in the raw tables, independent of Analysis.
bool brute_mono(const FinCategory& c, MorphismId f) {
  for (ObjectId w : c.objects()) {
    auto h = c.hom(w, c.dom(f));
    for (MorphismId g : h)
      for (MorphismId k : h)
        if (g != k && c.compose(f, g) == c.compose(f, k)) return false;
  }
  return true;
}

bool brute_epi(const FinCategory& c, MorphismId f) {
  for (ObjectId w : c.objects()) {
    auto h = c.hom(c.cod(f), w);
    for (MorphismId g : h)
      for (MorphismId k : h)
        if (g != k && c.compose(g, f) == c.compose(k, f)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("terminal category validates") {
  auto r = validate_category(terminal_description());
  REQUIRE(std::holds_alternative<FinCategory>(r));
  const auto& c = std::get<FinCategory>(r);
  CHECK(c.object_count() == 1);
  CHECK(c.morphism_count() == 1);
  CHECK(c.is_identity(MorphismId{0u}));
}

TEST_CASE("associativity violation names the triple") {
  // a.(b.a) = a.a = b but (a.b).a = b.a = a
  CategoryDescription d;
  d.objects = {"*"};
  d.morphisms = {{"id", "*", "*"}, {"a", "*", "*"}, {"b", "*", "*"}};
  d.identities = {{"*", "id"}};
  for (const char* x : {"id", "a", "b"}) {
    d.composition.push_back({"id", x, x});
    if (std::string(x) != "id") d.composition.push_back({x, "id", x});
  }
  d.composition.push_back({"a", "a", "b"});
  d.composition.push_back({"b", "a", "a"});
  d.composition.push_back({"a", "b", "b"});
  d.composition.push_back({"b", "b", "b"});
  auto r = validate_category(d);
  REQUIRE(std::holds_alternative<std::vector<ValidationError>>(r));
  const auto& errors = std::get<std::vector<ValidationError>>(r);
  bool named = false;
  for (const auto& e : errors) {
    CHECK(e.kind == ValidationError::Kind::associativity);
    CHECK(e.ids.size() == 3);
    if (e.ids == std::vector<std::string>{"a", "b", "a"}) named = true;
  }
  CHECK(named);
}

TEST_CASE("structural errors are all reported") {
  CategoryDescription d;
  d.objects = {"x", "x", "y"};
  d.morphisms = {{"f", "x", "z"}, {"idx", "x", "x"}, {"idx", "x", "x"}};
  d.identities = {{"x", "idx"}};
  auto r = validate_category(d);
  REQUIRE(std::holds_alternative<std::vector<ValidationError>>(r));
  std::vector<std::string> kinds;
  for (const auto& e : std::get<std::vector<ValidationError>>(r)) kinds.emplace_back(to_string(e.kind));
  auto has = [&](const char* k) { return std::find(kinds.begin(), kinds.end(), k) != kinds.end(); };
  CHECK(has("duplicate-object"));
  CHECK(has("unknown-object"));
  CHECK(has("duplicate-morphism"));
  CHECK(has("missing-identity"));
  CHECK(has("missing-composite"));
}

TEST_CASE("set builder output validates and composes like functions") {
  const auto& b = finset(3);
  const FinCategory& c = b.category;
  CHECK(c.object_count() == 4);
  // 1 + 1 + 1 + 1 | 0 + 1 + 2 + 3 | 0 + 1 + 4 + 9 | 0 + 1 + 8 + 27
  CHECK(c.morphism_count() == 4 + 6 + 14 + 36);
  for (MorphismId f : c.morphisms())
    for (ObjectId z : c.objects())
      for (MorphismId g : c.hom(c.cod(f), z)) {
        const auto& tf = b.tables[f.index()];
        const auto& tg = b.tables[g.index()];
        std::vector<int> expect;
        for (int x : tf) expect.push_back(tg[static_cast<std::size_t>(x)]);
        CHECK(b.tables[c.compose(g, f).index()] == expect);
      }
}

TEST_CASE("json round trip") {
  const FinCategory& c = chain2().category;
  auto j = to_json(c);
  auto back = validated_or_throw(description_from_json(j));
  CHECK(back == c);
  CHECK_THROWS_AS(description_from_json(nlohmann::json{{"objects", 3}}), std::invalid_argument);
}

TEST_CASE("dual of the 2-chain") {
  const FinCategory& c = chain2().category;
  const FinCategory d = dual(c);
  const MorphismId up = morphism(c, "0le1");
  CHECK(c.dom(up) == object(c, "0"));
  CHECK(d.dom(up) == object(c, "1"));
  CHECK(d.cod(up) == object(c, "0"));
  CHECK(d.morphism_count() == c.morphism_count());
  CHECK(dual(d) == c);
  CHECK(d.materialized() == d);
  CHECK(!(d == c));
}

TEST_CASE("mono in c iff epi in the dual, FinSet up to 3") {
  const FinCategory& c = finset(3).category;
  const FinCategory d = dual(c);
  for (MorphismId f : c.morphisms()) {
    CHECK(brute_mono(c, f) == brute_epi(d, f));
    CHECK(brute_mono(c, f) == injective(finset(3).tables[f.index()]));
  }
}

TEST_CASE("classification examples") {
  const auto& b = finset(3);
  const FinCategory& c = b.category;
  SUBCASE("identity has every flag") {
    for (ObjectId o : c.objects()) {
      auto p = classify_morphism(c, c.identity(o));
      CHECK(p.is_mono);
      CHECK(p.is_epi);
      CHECK(p.is_split_mono);
      CHECK(p.is_split_epi);
      CHECK(p.is_regular_mono);
      CHECK(p.is_regular_epi);
      CHECK(p.is_extremal_epi);
      CHECK(p.is_iso);
    }
  }
  SUBCASE("point inclusion into a two-element set") {
    auto f = b.find_morphism(object(c, "S1"), object(c, "S2"), std::vector<int>{0});
    REQUIRE(f);
    auto p = classify_morphism(c, *f);
    CHECK(p.is_mono);
    CHECK(p.is_split_mono);
    CHECK(p.is_regular_mono);
    CHECK(!p.is_epi);
    CHECK(!p.is_iso);
  }
  SUBCASE("2-chain arrow") {
    const FinCategory& t = chain2().category;
    auto p = classify_morphism(t, morphism(t, "0le1"));
    CHECK(p.is_mono);
    CHECK(p.is_epi);
    CHECK(!p.is_split_epi);
    CHECK(!p.is_extremal_epi);
  }
}

TEST_CASE("morphism classes") {
  const FinCategory& t = thin_category(chain(AlgebraKind::poset, 3)).category;
  auto isos = morphisms_of_class(t, "iso");
  CHECK(isos.size() == 3);
  for (MorphismId f : isos) CHECK(t.is_identity(f));
  CHECK(morphisms_of_class(t, "all").size() == t.morphism_count());
  CHECK_THROWS_AS(morphisms_of_class(t, "nonsense"), std::invalid_argument);

  const auto& b = finset(3);
  const FinCategory& c = b.category;
  const ObjectId two = object(c, "S2");
  std::size_t into_two = 0;
  for (MorphismId f : morphisms_of_class(c, "coproduct-inclusion"))
    if (c.cod(f) == two) {
      ++into_two;
      CHECK(injective(b.tables[f.index()]));
    }
  // injections into a 2-element set: 1 from 0, 2 from 1, 2 from 2
  CHECK(into_two == 5);
}

TEST_CASE("classification matches set-level oracles in FinSet") {
  const auto& b = finset(3);
  const FinCategory& c = b.category;
  Analysis a(c);
  for (MorphismId f : c.morphisms()) {
    const auto& t = b.tables[f.index()];
    const int dom = carrier(b, c.dom(f)), cod = carrier(b, c.cod(f));
    const bool inj = injective(t), surj = surjective(t, cod);
    const auto& p = a.profile(f);
    CHECK(p.is_mono == inj);
    CHECK(p.is_epi == surj);
    CHECK(p.is_iso == (inj && surj));
    CHECK(p.is_split_mono == (inj && (dom > 0 || cod == 0)));
    CHECK(p.is_split_epi == surj);
    CHECK(p.is_regular_epi == surj);
    CHECK(p.is_extremal_epi == surj);
    CHECK(p.is_regular_mono == inj);
  }
}

TEST_CASE("duality swaps classification flags in generated categories") {
  std::vector<const FinCategory*> cats{&finset(3).category, &built(AlgebraKind::pointed_set, 3).category,
                                       &chain2().category, &built(AlgebraKind::lattice, 3).category,
                                       &built(AlgebraKind::monoid, 3).category,
                                       &built(AlgebraKind::connected_poset, 3).category};
  for (const FinCategory* c : cats) {
    Analysis a(*c);
    Analysis& op = a.opposite();
    for (MorphismId f : c->morphisms()) {
      const auto& p = a.profile(f);
      const auto& q = op.profile(f);
      CHECK(p.is_mono == q.is_epi);
      CHECK(p.is_epi == q.is_mono);
      CHECK(p.is_split_mono == q.is_split_epi);
      CHECK(p.is_split_epi == q.is_split_mono);
      CHECK(p.is_regular_mono == q.is_regular_epi);
      CHECK(p.is_regular_epi == q.is_regular_mono);
      CHECK(p.is_iso == q.is_iso);
      if (p.is_split_epi) CHECK(p.is_epi);
      if (p.is_iso) {
        CHECK(p.is_extremal_epi);
        CHECK(p.is_regular_epi);
        CHECK(p.is_split_mono);
      }
      if (p.is_split_epi) CHECK(p.is_regular_epi);
      if (p.is_regular_epi) CHECK(p.is_epi);
    }
  }
}

TEST_CASE("regular epi shortcut agrees with exhaustive pair enumeration") {
  std::vector<const FinCategory*> cats{&finset(3).category, &built(AlgebraKind::monoid, 3).category,
                                       &built(AlgebraKind::semilattice, 3).category};
  for (const FinCategory* c : cats) {
    Analysis a(*c);
    for (MorphismId f : c->morphisms()) {
      bool exhaustive = false;
      for (ObjectId w : c->objects()) {
        auto h = c->hom(w, c->dom(f));
        for (MorphismId u : h)
          for (MorphismId v : h) {
            if (exhaustive || c->compose(f, u) != c->compose(f, v)) continue;
            exhaustive = is_universal_cocone(*c, CospanDiagram{parallel_base(*c, u, v), c->cod(f), {f}}).universal;
          }
      }
      CHECK(a.profile(f).is_regular_epi == exhaustive);
    }
  }
}
