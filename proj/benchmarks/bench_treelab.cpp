#include <benchmark/benchmark.h>

#include "treelab/estimator.hpp"
#include "treelab/impurity.hpp"
#include "treelab/learners.hpp"
#include "treelab/local.hpp"
#include "treelab/targets.hpp"

using namespace treelab;

namespace {

const LabeledDataset& dataset(std::size_t d, std::size_t n) {
  static const LabeledDataset data =
      sample_dataset(TargetFunction::parse("dnf:1&2|3&4|5&6&7", d), n, d, RandomnessTape(1));
  return data;
}

void BM_BestSplit(benchmark::State& state) {
  const auto b = static_cast<std::size_t>(state.range(0));
  const LabeledDataset& data = dataset(20, 1 << 16);
  std::vector<Point> points(data.points().begin(), data.points().begin() + static_cast<std::ptrdiff_t>(b));
  std::vector<Label> labels(data.labels().begin(), data.labels().begin() + static_cast<std::ptrdiff_t>(b));
  for (auto _ : state) benchmark::DoNotOptimize(best_split(gini(), points, labels, LeafPath(), 20));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(b));
}
BENCHMARK(BM_BestSplit)->RangeMultiplier(4)->Range(64, 16384);

void BM_MinibatchTopDown(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const LabeledDataset& data = dataset(20, 1 << 16);
  const RandomnessTape tape(2);
  for (auto _ : state) benchmark::DoNotOptimize(minibatch_top_down(t, 256, data, gini(), tape));
}
BENCHMARK(BM_MinibatchTopDown)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);

void BM_LocalPredict(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const LabeledDataset& data = dataset(20, 1 << 16);
  const UnlabeledDataset unlabeled = data.unlabeled();
  const Point x = Point::parse("+-+-+-+-+-+-+-+-+-+-");
  for (auto _ : state) {
    LabelOracle oracle(std::vector<Label>(data.labels().begin(), data.labels().end()));
    benchmark::DoNotOptimize(local_learner(t, 64, unlabeled, oracle, x, gini(), RandomnessTape(3)));
  }
}
BENCHMARK(BM_LocalPredict)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state) {
  const auto test_size = static_cast<std::size_t>(state.range(0));
  const LabeledDataset& data = dataset(20, 1 << 16);
  const UnlabeledDataset unlabeled = data.unlabeled();
  const TestSet test =
      sample_dataset(TargetFunction::parse("dnf:1&2|3&4|5&6&7", 20), test_size, 20, RandomnessTape(4));
  for (auto _ : state) {
    LabelOracle oracle(std::vector<Label>(data.labels().begin(), data.labels().end()));
    benchmark::DoNotOptimize(estimate_learnability(32, 64, unlabeled, oracle, test, gini(), RandomnessTape(5)));
  }
}
BENCHMARK(BM_Estimate)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
