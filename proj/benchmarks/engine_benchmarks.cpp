#include <benchmark/benchmark.h>

#include <random>

#include "cactus/conflict.hpp"
#include "cactus/scorer.hpp"
#include "cactus/stats.hpp"
#include "generators.hpp"

namespace {

using namespace cactus;

void BM_DetectConflicts(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<std::string> universe;
  for (std::size_t i = 0; i < 400; ++i) universe.push_back(testing::row_id(i));
  std::vector<ObjectiveFunction> functions;
  for (int i = 0; i < 64; ++i) {
    functions.push_back(testing::random_function(rng, universe, {"p", "q", "r"}, 10,
                                                 static_cast<std::size_t>(state.range(0))));
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(detect_conflicts(functions[i++ % functions.size()]));
}
BENCHMARK(BM_DetectConflicts)->Arg(20)->Arg(200);

void BM_TopVariantAttributes(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Dataset ds = testing::random_dataset(rng, 3000, 12, 5);
  const DataSplit split = make_split(ds, 0.2, 1);
  const StandardizedView view(ds, split);
  std::vector<std::string> ids(split.train_ids.begin(), split.train_ids.end());
  const IdSet subset = testing::random_subset(rng, ids, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(top_variant_attributes(view, subset, 4));
}
BENCHMARK(BM_TopVariantAttributes)->Arg(50)->Arg(1000);

void BM_SelectModel(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Dataset ds = testing::random_dataset(rng, 1000, 6, 4, 2.0);
  const DataSplit split = make_split(ds, 0.2, 1);
  ObjectiveFunction of;
  of.n_samples = static_cast<std::uint32_t>(state.range(0));
  of.objectives.push_back({ObjectiveKind::ValidationAccuracy, {}, std::nullopt, 1.0});
  SolverOptions options;
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(select_model(of, ds, split, options));
}
BENCHMARK(BM_SelectModel)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
