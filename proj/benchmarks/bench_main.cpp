#include <benchmark/benchmark.h>

#include "sparsebell/candidate.hpp"
#include "sparsebell/carleson_seq.hpp"
#include "sparsebell/extremal_dp.hpp"
#include "sparsebell/supersolution.hpp"

using namespace sparsebell;

static void BM_DpFill(benchmark::State& state) {
  const auto depth = static_cast<unsigned>(state.range(0));
  DpLimits limits;
  limits.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    auto table = ExtremalTable::build(GeneralRational(16, 5), depth, 6, limits);
    benchmark::DoNotOptimize(table.cell_count());
  }
}
BENCHMARK(BM_DpFill)->Args({6, 1})->Args({8, 1})->Args({10, 1})->Args({10, 4})->Unit(benchmark::kMillisecond);

static void BM_MainInequality(benchmark::State& state) {
  const GeneralRational C(16, 5);
  const auto grid = CheckGrid::make(C, static_cast<unsigned>(state.range(0)), -2, 10);
  const auto fn = candidate_function(C);
  for (auto _ : state) {
    auto report = check_main_inequality(fn, grid);
    benchmark::DoNotOptimize(report.main.checked);
  }
}
BENCHMARK(BM_MainInequality)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_CandidateEval(benchmark::State& state) {
  const auto params = CandidateParams::make(GeneralRational(16, 5));
  const BellmanPoint p{GeneralRational(8, 5), GeneralRational(9, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(candidate_eval(params, p));
}
BENCHMARK(BM_CandidateEval);

static void BM_RandomCarleson(benchmark::State& state) {
  const auto depth = static_cast<unsigned>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto seq = random_carleson(depth, GeneralRational(5, 2), seed++);
    benchmark::DoNotOptimize(seq.selected().size());
  }
}
BENCHMARK(BM_RandomCarleson)->Arg(8)->Arg(12)->Arg(16);

static void BM_LevelSet(benchmark::State& state) {
  const auto seq = random_carleson(static_cast<unsigned>(state.range(0)), GeneralRational(3), 7);
  for (auto _ : state) benchmark::DoNotOptimize(level_set_measure(seq, 2));
}
BENCHMARK(BM_LevelSet)->Arg(8)->Arg(14);

BENCHMARK_MAIN();
