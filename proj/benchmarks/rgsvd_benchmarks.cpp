#include <benchmark/benchmark.h>

#include <map>

#include "rgsvd/gsvd.hpp"
#include "rgsvd/problems.hpp"
#include "rgsvd/randomized_gsvd.hpp"
#include "rgsvd/sampling.hpp"
#include "rgsvd/tikhonov.hpp"

using namespace rgsvd;

namespace {

const TikhonovProblem& shaw_problem(Index n) {
  static std::map<Index, TikhonovProblem> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    TestProblemSpec spec;
    spec.name = "shaw";
    spec.n = n;
    spec.seed = 1;
    it = cache.emplace(n, generate(spec)).first;
  }
  return it->second;
}

SamplerConfig sampler(double eps) {
  SamplerConfig cfg;
  cfg.epsilon = eps;
  cfg.blocksize = 4;
  cfg.seed = 7;
  return cfg;
}

void BM_RangeFinder(benchmark::State& state) {
  const auto& prob = shaw_problem(state.range(0));
  const SamplerConfig cfg = sampler(1e-2);
  Index cols = 0;
  for (auto _ : state) {
    const RangeBasis basis = adaptive_range_finder(prob.a, cfg);
    cols = basis.columns();
    benchmark::DoNotOptimize(basis.q.data());
  }
  state.counters["columns"] = static_cast<double>(cols);
}
BENCHMARK(BM_RangeFinder)->Arg(512)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_RangeFinderRankSaturated(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = uniform_test_matrix(n, n, 3);
  const SamplerConfig cfg = sampler(1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(adaptive_range_finder(a, cfg).q.data());
}
BENCHMARK(BM_RangeFinderRankSaturated)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_GsvdFullRank(benchmark::State& state) {
  const Index n = state.range(0);
  const GmpPair pair = GmpPair::trusted(uniform_test_matrix(n + n / 2, n, 1),
                                        first_difference(n));
  for (auto _ : state) benchmark::DoNotOptimize(gsvd_full_rank(pair).x.data());
}
BENCHMARK(BM_GsvdFullRank)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_GsvdNumericalRankShaw(benchmark::State& state) {
  const auto& prob = shaw_problem(state.range(0));
  const GmpPair pair = GmpPair::trusted(prob.a, prob.l);
  for (auto _ : state) benchmark::DoNotOptimize(gsvd_numerical_rank(pair).x.data());
}
BENCHMARK(BM_GsvdNumericalRankShaw)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_RgsvdOverdetermined(benchmark::State& state) {
  const auto& prob = shaw_problem(state.range(0));
  const SamplerConfig cfg = sampler(1e-2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rgsvd_overdetermined(prob.a, prob.l, cfg).z.data());
  }
}
BENCHMARK(BM_RgsvdOverdetermined)->Arg(512)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_RgsvdUnderdetermined(benchmark::State& state) {
  const auto& prob = shaw_problem(state.range(0));
  const Matrix a = prob.a.topRows(state.range(0) / 2);
  const SamplerConfig cfg = sampler(1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(rgsvd_underdetermined(a, prob.l, cfg).z.data());
}
BENCHMARK(BM_RgsvdUnderdetermined)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_GcvAndSolve(benchmark::State& state) {
  const auto& prob = shaw_problem(state.range(0));
  const ApproxGsvd approx = rgsvd_overdetermined(prob.a, prob.l, sampler(1e-2));
  for (auto _ : state) {
    const double lambda = gcv_lambda(filter_model(approx, prob.b, GcvRows::ambient)).lambda;
    benchmark::DoNotOptimize(
        solve_rgsvd(approx, prob.b, lambda, RgsvdSolvePath::filter).x.data());
  }
}
BENCHMARK(BM_GcvAndSolve)->Arg(2048)->Unit(benchmark::kMicrosecond);

void BM_SolveExact(benchmark::State& state) {
  const auto& prob = shaw_problem(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(prob, 0.1).x.data());
}
BENCHMARK(BM_SolveExact)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
