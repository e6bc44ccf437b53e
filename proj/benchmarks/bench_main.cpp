#include <benchmark/benchmark.h>

#include "extmorph/algebra.hpp"
#include "extmorph/analysis.hpp"
#include "extmorph/extensivity.hpp"
#include "extmorph/relcalc.hpp"

using namespace extmorph;

namespace {

BuilderConfig config(AlgebraKind k, int n) { return {k, n, true, true, true, std::nullopt}; }

const BuiltCategory& cached(AlgebraKind k, int n) {
  static const BuiltCategory sets3 = build_category(config(AlgebraKind::set, 3));
  static const BuiltCategory sets4 = build_category(config(AlgebraKind::set, 4));
  static const BuiltCategory lat4 = build_category(config(AlgebraKind::lattice, 4));
  if (k == AlgebraKind::lattice) return lat4;
  return n == 3 ? sets3 : sets4;
}

void build_sets(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_category(config(AlgebraKind::set, n)));
}
BENCHMARK(build_sets)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void build_lattices(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_category(config(AlgebraKind::lattice, n)));
}
BENCHMARK(build_lattices)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

// Fresh analysis each iteration so the limit caches start cold.
void extensive_all_finset(benchmark::State& state) {
  const BuiltCategory& b = cached(AlgebraKind::set, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Analysis a(b.category);
    int passed = 0;
    for (MorphismId f : b.category.morphisms()) passed += is_extensive_morphism(a, f).passed();
    benchmark::DoNotOptimize(passed);
  }
  state.counters["morphisms"] = static_cast<double>(b.category.morphism_count());
}
BENCHMARK(extensive_all_finset)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void coextensive_all_lattice4(benchmark::State& state) {
  const BuiltCategory& b = cached(AlgebraKind::lattice, 4);
  for (auto _ : state) {
    Analysis a(b.category);
    int passed = 0;
    for (MorphismId f : b.category.morphisms()) passed += is_coextensive_morphism(a, f).passed();
    benchmark::DoNotOptimize(passed);
  }
}
BENCHMARK(coextensive_all_lattice4)->Unit(benchmark::kMillisecond);

void relation_enumeration(benchmark::State& state) {
  const BuiltCategory& b = cached(AlgebraKind::set, 3);
  for (auto _ : state) {
    Analysis a(b.category);
    RelationCalculus rc(a);
    std::size_t n = 0;
    for (ObjectId x : b.category.objects())
      for (ObjectId y : b.category.objects()) n += rc.relations(x, y).size();
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(relation_enumeration)->Unit(benchmark::kMillisecond);

void concrete_compose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  namespace sr = set_relations;
  const SetRelation d = sr::delta(n), t = sr::nabla(n);
  for (auto _ : state) benchmark::DoNotOptimize(sr::compose(sr::compose(d, t), sr::opposite(t)));
}
BENCHMARK(concrete_compose)->DenseRange(2, 8, 2);

}  // namespace
BENCHMARK_MAIN();
