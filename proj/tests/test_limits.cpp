#include <doctest.h>

#include <set>

#include "extmorph/limits.hpp"
#include "support.hpp"

using namespace extmorph;
using namespace testing_support;

namespace {

std::set<int> image_of(const std::vector<int>& t) { return {t.begin(), t.end()}; }

}  // namespace

TEST_CASE("colimit examples") {
  const auto& b = finset(3);
  const FinCategory& c = b.category;
  const ObjectId one = object(c, "S1");

  SUBCASE("coproduct of two singletons") {
    auto d = coproduct(c, one, one);
    REQUIRE(d);
    CHECK(carrier(b, d->nadir) == 2);
    REQUIRE(d->legs.size() == 2);
    const auto& t0 = b.tables[d->legs[0].index()];
    const auto& t1 = b.tables[d->legs[1].index()];
    CHECK(t0 != t1);
    CHECK(is_universal_cocone(c, *d).universal);
  }
  SUBCASE("initial object is empty") {
    auto d = initial_object(c);
    REQUIRE(d);
    CHECK(carrier(b, d->nadir) == 0);
  }
  SUBCASE("pushout of the 2-chain arrow along itself") {
    const FinCategory& t = chain2().category;
    const MorphismId up = morphism(t, "0le1");
    auto d = pushout(t, up, up);
    REQUIRE(d);
    CHECK(d->nadir == object(t, "1"));
    CHECK(all_colimits(t, d->base).size() == 1);
  }
  SUBCASE("malformed bases are errors, not-found is a value") {
    const MorphismId id1 = c.identity(one);
    const MorphismId id0 = c.identity(object(c, "S0"));
    CHECK_THROWS_AS(parallel_base(c, id1, id0), std::invalid_argument);
    CHECK_THROWS_AS(corner_base(c, id1, id0), std::invalid_argument);
    // 2 + 2 is not within the budget of 3
    const ObjectId two = object(c, "S2");
    CHECK(!coproduct(c, two, two));
  }
}

TEST_CASE("limit examples") {
  const auto& b4 = finset(4);
  const FinCategory& c4 = b4.category;
  auto p = product(c4, object(c4, "S2"), object(c4, "S2"));
  REQUIRE(p);
  CHECK(carrier(b4, p->apex) == 4);
  // the two projections separate points
  std::set<std::pair<int, int>> pairs;
  for (int x = 0; x < 4; ++x)
    pairs.emplace(b4.tables[p->legs[0].index()][static_cast<std::size_t>(x)],
                  b4.tables[p->legs[1].index()][static_cast<std::size_t>(x)]);
  CHECK(pairs.size() == 4);

  const auto& b = finset(3);
  const FinCategory& c = b.category;
  auto t = terminal_object(c);
  REQUIRE(t);
  CHECK(carrier(b, t->apex) == 1);

  const MorphismId incl = table_morphism(b, "S1", "S2", {0});
  const MorphismId constant = table_morphism(b, "S2", "S2", {0, 0});
  auto pb = pullback(c, incl, constant);
  REQUIRE(pb);
  CHECK(carrier(b, pb->apex) == 2);
  CHECK(c.compose(incl, pb->legs[0]) == c.compose(constant, pb->legs[1]));
}

TEST_CASE("universality verdicts") {
  SUBCASE("0 + X = X in pointed sets") {
    const auto& b = built(AlgebraKind::pointed_set, 3);
    const FinCategory& c = b.category;
    const ObjectId zero = object(c, "P1");
    for (ObjectId x : c.objects()) {
      REQUIRE(c.hom(zero, x).size() == 1);
      CospanDiagram d{discrete_base({zero, x}), x, {c.hom(zero, x)[0], c.identity(x)}};
      auto r = is_universal_cocone(c, d);
      CHECK(r.universal);
      CHECK(!r.counterexample);
      CHECK(universal_witness(c, d).mediators.size() == [&] {
        std::size_t n = 0;
        for (ObjectId y : c.objects()) n += c.hom(x, y).size();
        return n;
      }());
    }
  }
  SUBCASE("two equal injections do not form a coproduct") {
    const auto& b = finset(3);
    const FinCategory& c = b.category;
    const MorphismId i = table_morphism(b, "S1", "S2", {0});
    const ObjectId one = object(c, "S1");
    auto r = is_universal_cocone(c, CospanDiagram{discrete_base({one, one}), object(c, "S2"), {i, i}});
    CHECK(!r.universal);
    REQUIRE(r.counterexample);
    CHECK(r.counterexample->mediators.size() != 1);
    CHECK(r.counterexample->cocone.size() == 2);
  }
  SUBCASE("non-commuting cocone is an error") {
    const auto& b = finset(3);
    const FinCategory& c = b.category;
    const MorphismId u = table_morphism(b, "S1", "S2", {0});
    const MorphismId v = table_morphism(b, "S1", "S2", {1});
    const MorphismId q = c.identity(object(c, "S2"));
    CHECK_THROWS_AS(is_universal_cocone(c, CospanDiagram{parallel_base(c, u, v), object(c, "S2"), {q}}),
                    std::invalid_argument);
  }
  SUBCASE("colimit outputs are universal") {
    const auto& b = built(AlgebraKind::lattice, 3);
    const FinCategory& c = b.category;
    for (MorphismId f : c.morphisms())
      for (MorphismId g : c.morphisms()) {
        if (c.dom(f) != c.dom(g)) continue;
        if (auto d = pushout(c, f, g)) CHECK(is_universal_cocone(c, *d).universal);
      }
  }
}

TEST_CASE("kernel pairs") {
  const auto& b = finset(4);
  const FinCategory& c = b.category;
  for (ObjectId o : c.objects()) {
    auto k = kernel_pair(c, c.identity(o));
    REQUIRE(k);
    CHECK(k->legs[0] == k->legs[1]);
    CHECK(carrier(b, k->apex) == carrier(b, o));
  }
  auto k = kernel_pair(c, table_morphism(b, "S2", "S1", {0, 0}));
  REQUIRE(k);
  CHECK(carrier(b, k->apex) == 4);
  // kernel pair apex size = sum over fibres of |fibre|^2
  for (MorphismId f : c.morphisms()) {
    const auto& t = b.tables[f.index()];
    std::vector<int> fibre(static_cast<std::size_t>(carrier(b, c.cod(f))), 0);
    for (int y : t) ++fibre[static_cast<std::size_t>(y)];
    int expect = 0;
    for (int s : fibre) expect += s * s;
    auto kp = kernel_pair(c, f);
    if (expect <= 4) {
      REQUIRE(kp);
      CHECK(carrier(b, kp->apex) == expect);
    }
  }
}

TEST_CASE("products of morphisms") {
  const auto& b = finset(4);
  const FinCategory& c = b.category;
  Analysis a(c);
  const ObjectId two = object(c, "S2"), one = object(c, "S1");
  auto p22 = a.product(two, two);
  auto p12 = a.product(one, two);
  REQUIRE(p22);
  REQUIRE(p12);
  CHECK(product_of_morphisms(c, c.identity(two), c.identity(two), *p22, *p22) == c.identity(p22->apex));

  const MorphismId swap = table_morphism(b, "S2", "S2", {1, 0});
  CHECK(a.is_iso(product_of_morphisms(c, swap, swap, *p22, *p22)));
  CHECK(a.is_iso(product_of_morphisms(c, c.identity(two), swap, *p22, *p22)));

  // f1 x f2 mono with epi projections forces f1, f2 mono
  for (MorphismId f1 : c.hom(two, two))
    for (MorphismId f2 : c.hom(two, two)) {
      const MorphismId fx = product_of_morphisms(c, f1, f2, *p22, *p22);
      CHECK(a.is_mono(fx) == (a.is_mono(f1) && a.is_mono(f2)));
    }
  const MorphismId point = table_morphism(b, "S1", "S2", {1});
  const MorphismId fx = product_of_morphisms(c, point, swap, *p12, *p22);
  CHECK(c.compose(p22->legs[0], fx) == c.compose(point, p12->legs[0]));
  CHECK(c.compose(p22->legs[1], fx) == c.compose(swap, p12->legs[1]));

  SpanDiagram bogus = *p22;
  bogus.legs[1] = bogus.legs[0];
  CHECK_THROWS_AS(product_of_morphisms(c, swap, swap, bogus, *p22), std::invalid_argument);

  const auto& b3 = finset(3);
  Analysis a3(b3.category);
  auto s01 = a3.coproduct(object(b3.category, "S0"), object(b3.category, "S1"));
  auto s11 = a3.coproduct(object(b3.category, "S1"), object(b3.category, "S1"));
  REQUIRE(s01);
  REQUIRE(s11);
  const MorphismId bang = b3.category.hom(object(b3.category, "S0"), object(b3.category, "S1"))[0];
  const MorphismId sum = coproduct_of_morphisms(b3.category, bang, b3.category.identity(object(b3.category, "S1")),
                                                *s01, *s11);
  CHECK(b3.category.compose(sum, s01->legs[1]) == s11->legs[1]);
  CHECK(!a3.is_epi(sum));
}

TEST_CASE("image factorisation") {
  SUBCASE("FinSet") {
    const auto& b = finset(3);
    const FinCategory& c = b.category;
    Analysis a(c);
    for (MorphismId f : c.morphisms()) {
      auto im = image_factorisation(c, f);
      REQUIRE(im);
      CHECK(c.compose(im->mono, im->epi) == f);
      CHECK(a.is_mono(im->mono));
      CHECK(a.profile(im->epi).is_regular_epi);
      CHECK(carrier(b, c.cod(im->epi)) == static_cast<int>(image_of(b.tables[f.index()]).size()));
      if (a.is_mono(f)) CHECK(a.is_iso(im->epi));
    }
    auto im = image_factorisation(c, table_morphism(b, "S2", "S2", {0, 0}));
    REQUIRE(im);
    CHECK(c.cod(im->epi) == object(c, "S1"));
    CHECK(b.tables[im->mono.index()] == std::vector<int>{0});
  }
  SUBCASE("lattices agree with the set-level image") {
    const auto& b = built(AlgebraKind::lattice, 4);
    const FinCategory& c = b.category;
    Analysis a(c);
    for (MorphismId f : c.morphisms()) {
      auto im = a.image_factorisation(f);
      REQUIRE(im);
      CHECK(c.compose(im->mono, im->epi) == f);
      CHECK(image_of(b.tables[im->mono.index()]) == image_of(b.tables[f.index()]));
      CHECK(surjective(b.tables[im->epi.index()], carrier(b, c.cod(im->epi))));
    }
  }
}

TEST_CASE("colimits are unique up to a unique comparison iso") {
  for (const FinCategory* c : {&finset(3).category, &built(AlgebraKind::semilattice, 3).category,
                               &built(AlgebraKind::pointed_set, 3).category}) {
    Analysis a(*c);
    for (ObjectId x : c->objects())
      for (ObjectId y : c->objects()) {
        auto all = all_colimits(*c, discrete_base({x, y}));
        for (const auto& d : all) {
          auto iso = comparison_iso(*c, all.front(), d);
          REQUIRE(iso);
          CHECK(a.is_iso(*iso));
          for (std::size_t i = 0; i < d.legs.size(); ++i) CHECK(c->compose(*iso, all.front().legs[i]) == d.legs[i]);
        }
      }
  }
}

TEST_CASE("limits are colimits in the dual") {
  for (const FinCategory* c : {&finset(3).category, &built(AlgebraKind::lattice, 3).category,
                               &built(AlgebraKind::monoid, 3).category}) {
    const FinCategory d = dual(*c);
    for (ObjectId x : c->objects())
      for (ObjectId y : c->objects()) {
        auto l = product(*c, x, y);
        auto k = coproduct(d, x, y);
        CHECK(l.has_value() == k.has_value());
        if (l && k) CHECK(*l == as_span(*k));
      }
    for (MorphismId f : c->morphisms())
      for (MorphismId g : c->morphisms()) {
        if (c->cod(f) != c->cod(g)) continue;
        auto l = pullback(*c, f, g);
        auto k = pushout(d, f, g);
        CHECK(l.has_value() == k.has_value());
        if (l && k) CHECK(*l == as_span(*k));
      }
  }
}

TEST_CASE("pullback pasting") {
  const auto& b = finset(3);
  const FinCategory& c = b.category;
  Analysis a(c);
  std::size_t pasted = 0;
  for (MorphismId g : c.morphisms())
    for (MorphismId h : c.morphisms()) {
      if (c.cod(g) != c.cod(h) || (g.value + h.value) % 3 != 0) continue;
      auto right = a.pullback(g, h);
      if (!right) continue;
      for (ObjectId o : c.objects())
        for (MorphismId f : c.hom(o, c.dom(g))) {
          auto rect = a.pullback(c.compose(g, f), h);
          if (!rect) continue;
          const MorphismId legs[2] = {c.compose(f, rect->legs[0]), rect->legs[1]};
          auto k = a.mediator_into(*right, rect->apex, legs);
          REQUIRE(k);
          CHECK(a.is_pullback_square(rect->legs[0], *k, f, right->legs[0]));
          ++pasted;
        }
    }
  CHECK(pasted > 100);
}
