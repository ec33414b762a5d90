#include <benchmark/benchmark.h>

#include "hace/apps.hpp"
#include "hace/catspec.hpp"
#include "hace/ends.hpp"
#include "hace/generate.hpp"
#include "hace/kusarigama.hpp"

using namespace hace;

namespace {

SetFunctorPQ generated(std::uint64_t seed, std::size_t arity) {
  Profile prof;
  prof.sig = arity == 1 ? VarianceSig{1, 0} : arity == 2 ? VarianceSig{1, 1} : VarianceSig{2, 1};
  return resolve(generate(seed, prof)).functors.at("F");
}

void BM_End(benchmark::State& state) {
  auto D = generated(7, state.range(1));
  auto m = all_end_methods()[state.range(0)];
  state.SetLabel(to_string(m));
  for (auto _ : state) {
    benchmark::DoNotOptimize(end_pq(D, m));
  }
}
BENCHMARK(BM_End)->ArgsProduct({{0, 1, 2, 3}, {2, 3}});

void BM_Coend(benchmark::State& state) {
  auto D = generated(7, state.range(1));
  auto m = all_end_methods()[state.range(0)];
  state.SetLabel(to_string(m));
  for (auto _ : state) {
    benchmark::DoNotOptimize(coend_pq(D, m));
  }
}
BENCHMARK(BM_Coend)->ArgsProduct({{0, 1, 2, 3}, {2, 3}});

void BM_UniversalProperty(benchmark::State& state) {
  auto D = generated(3, 2);
  auto e = end_pq(D);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_universal_property(e, D, state.range(0)));
  }
}
BENCHMARK(BM_UniversalProperty)->DenseRange(1, 3);

void BM_Cokusarigama(benchmark::State& state) {
  auto F = generated(5, state.range(0));
  for (auto _ : state) {
    auto J = cokusarigama(F);
    for (std::size_t t = 0; t < J.functor().domain()->num_objects(); ++t) {
      benchmark::DoNotOptimize(J.functor().fiber(t));
    }
  }
}
BENCHMARK(BM_Cokusarigama)->DenseRange(1, 2);

void BM_Day(benchmark::State& state) {
  auto    M = monoid_monoidal(build_monoid("Z3", {{"e", "a", "b"}, "e", {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}}));
  Rng     rng(1);
  Profile prof;
  std::vector<SetFunctorPQ> Fs;
  for (std::int64_t k = 0; k < state.range(0); ++k) {
    Fs.push_back(random_functor(rng, M.base, {1, 0}, prof));
  }
  for (auto _ : state) {
    auto D = day_convolution(M, Fs);
    for (std::size_t x = 0; x < M.base->num_objects(); ++x) {
      benchmark::DoNotOptimize(D.fiber(Tuple{x}));
    }
  }
}
BENCHMARK(BM_Day)->DenseRange(1, 3);

}  // namespace

BENCHMARK_MAIN();
