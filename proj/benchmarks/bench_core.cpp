#include <benchmark/benchmark.h>

#include "qdiv/classical.hpp"
#include "qdiv/hypothesis.hpp"
#include "qdiv/random.hpp"
#include "qdiv/variational.hpp"

using namespace qdiv;

namespace {

StatePair make_pair(Eigen::Index d) {
  Rng rng(42);
  return random_full_pair(d, rng);
}

void EigHermitian(benchmark::State& state) {
  Rng rng(7);
  const Matrix g = random_ginibre(state.range(0), state.range(0), rng);
  const Matrix h = (g + g.adjoint()) / 2.0;
  for (auto _ : state) {
    HermMatrix a(h);  // fresh cache each round
    benchmark::DoNotOptimize(a.spectral().eigenvalues(0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(EigHermitian)->RangeMultiplier(4)->Range(16, 256)->Complexity();

void SandwichedQ(benchmark::State& state) {
  const auto pair = make_pair(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sandwiched_q(pair.rho, pair.sigma, 2.0).value());
}
BENCHMARK(SandwichedQ)->Arg(2)->Arg(4)->Arg(8);

void ClosedFormOptimizer(benchmark::State& state) {
  const auto pair = make_pair(6);
  for (auto _ : state)
    benchmark::DoNotOptimize(closed_form_optimizer(pair.rho, pair.sigma, 2.0).value);
}
BENCHMARK(ClosedFormOptimizer);

void HoeffdingAntiDivergence(benchmark::State& state) {
  const auto pair = make_pair(3);
  for (auto _ : state)
    benchmark::DoNotOptimize(hoeffding_anti_divergence(pair.rho, pair.sigma, 0.3).value());
}
BENCHMARK(HoeffdingAntiDivergence);

void MinType1Classical(benchmark::State& state) {
  RealVector p(2), q(2);
  p << 0.5, 0.5;
  q << 1.0 / 3.0, 2.0 / 3.0;
  const FdState rho = FdState::from_diagonal(p);
  const FdState sigma = FdState::from_diagonal(q);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        min_type1(rho, sigma, n, 0.25, TestingPath::Classical).alpha_star);
}
BENCHMARK(MinType1Classical)->Arg(256)->Arg(2048)->Arg(8192);

void MinType1RankOne(benchmark::State& state) {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  const FdState rho = FdState::from_density(HermMatrix(m));
  RealVector q(2);
  q << 2.0 / 3.0, 1.0 / 3.0;
  const FdState sigma = FdState::from_diagonal(q);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(min_type1(rho, sigma, n, 0.9).alpha_star);
}
BENCHMARK(MinType1RankOne)->Arg(6)->Arg(10);

void GicarLevelQ(benchmark::State& state) {
  const auto mu1 = UnitIntervalMeasure::atomic({{0.3, 0.5}, {0.7, 0.5}});
  const auto mu2 = UnitIntervalMeasure::atomic({{0.3, 0.25}, {0.5, 0.5}, {0.7, 0.25}});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gicar_q(mu1, mu2, n, 2.0).value());
}
BENCHMARK(GicarLevelQ)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
