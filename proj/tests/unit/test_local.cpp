#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "treelab/estimator.hpp"
#include "treelab/io.hpp"
#include "treelab/learners.hpp"
#include "treelab/local.hpp"
#include "treelab/oracle.hpp"
#include "treelab/params.hpp"
#include "treelab/targets.hpp"

using namespace treelab;

namespace {

LabelOracle oracle_for(const LabeledDataset& data) {
  return LabelOracle(std::vector<Label>(data.labels().begin(), data.labels().end()));
}

}  // namespace

TEST_CASE("estimate_size") {
  PartialTree tree(2);
  const auto [neg, pos] = tree.split(tree.root(), 0);
  tree.split(pos, 1);
  (void)neg;
  std::vector<Point> cube;
  for (std::uint64_t m = 0; m < 4; ++m) cube.emplace_back(2, m);
  CHECK(estimate_size(tree, cube) == 3.0);
  CHECK(estimate_size(PartialTree(5), std::vector<Point>{Point::parse("+++++")}) == 1.0);
  CHECK_THROWS(estimate_size(tree, std::vector<Point>{}));
}

TEST_CASE("estimate_size is unbiased over the cube") {
  RandomnessTape tape(12);
  for (int k = 0; k < 10; ++k) {
    auto stream = tape.stream("tree", std::to_string(k));
    const DecisionTree tree = random_tree(10, 8, 0.6, stream);
    std::vector<Point> cube;
    for (std::uint64_t m = 0; m < 1024; ++m) cube.emplace_back(10, m);
    CHECK(estimate_size(tree.shape(), cube) == static_cast<double>(tree.size()));
  }
}

TEST_CASE("local learner with t = 1 answers the root batch") {
  RandomnessTape tape(2);
  const TargetFunction f = TargetFunction::majority(7);
  const LabeledDataset data = sample_dataset(f, 500, 7, tape);
  LabelOracle oracle = oracle_for(data);
  const auto global = top_down_size_estimate(1, 32, data, gini(), tape);
  const Point x = Point::parse("+-+-+-+");
  CHECK(local_learner(1, 32, data.unlabeled(), oracle, x, gini(), tape) == global.tree.evaluate(x));
  CHECK(oracle.query_count() <= 32);
}

TEST_CASE("local learner matches the global size-estimate tree") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    RandomnessTape tape(seed);
    const TargetFunction f = TargetFunction::parse("dnf:1|2&3|4&5&6", 12);
    const LabeledDataset data = sample_dataset(f, 4096, 12, tape);
    const auto global = top_down_size_estimate(32, 64, data, gini(), tape);
    auto queries = tape.stream("queries");
    for (int k = 0; k < 30; ++k) {
      const Point x = queries.point(12);
      LabelOracle oracle = oracle_for(data);
      REQUIRE(local_learner(32, 64, data.unlabeled(), oracle, x, gini(), tape) == global.tree.evaluate(x));
      REQUIRE(oracle.query_count() <= local_label_bound(32, 64));
    }
  }
}

TEST_CASE("local strands follow the global split order") {
  RandomnessTape tape(21);
  const TargetFunction f = TargetFunction::majority(10);
  const LabeledDataset data = sample_dataset(f, 2048, 10, tape);
  const auto global = top_down_size_estimate(24, 32, data, gini(), tape);

  LabelOracle oracle = oracle_for(data);
  GrowthEngine::Options opts;
  opts.target_size = 24;
  opts.batch_size = 32;
  opts.depth_cap = max_depth_for(24);
  opts.stop_on_estimate = true;
  opts.tracked_only = true;
  GrowthEngine local(gini(), 10, data.points(), [&](std::size_t i) { return oracle.label(i); }, tape, opts);
  local.set_strands(draw_strands(32, 10, tape));
  local.add_focus(Point::parse("+-+-+-+-+-"));
  local.run();

  // Every local split appears in the global trace with the same coordinate,
  // and in the same relative order.
  std::size_t cursor = 0;
  const auto& g = global.trace.records();
  for (const auto& r : local.trace().records()) {
    while (cursor < g.size() && !(g[cursor].leaf == r.leaf)) ++cursor;
    REQUIRE(cursor < g.size());
    CHECK(g[cursor].coord == r.coord);
    CHECK(g[cursor].gain == r.gain);
  }
  CHECK(local.size_estimate() == global.size_estimate);
}

TEST_CASE("estimator equals the global test error") {
  RandomnessTape tape(31);
  const TargetFunction f = TargetFunction::majority(9);
  const LabeledDataset data = sample_dataset(f, 4096, 9, tape);
  const auto global = top_down_size_estimate(16, 48, data, gini(), tape);

  TestSet self(9), flipped(9);
  auto points = tape.stream("test-points");
  for (int k = 0; k < 60; ++k) {
    const Point x = points.point(9);
    self.add(x, global.tree.evaluate(x));
    flipped.add(x, static_cast<Label>(1 - global.tree.evaluate(x)));
  }
  LabelOracle o1 = oracle_for(data);
  const EstimateResult r1 = estimate_learnability(16, 48, data.unlabeled(), o1, self, gini(), tape);
  CHECK(r1.error == 0.0);
  CHECK(r1.unique_labels <= estimator_label_bound(16, 48, 60));
  LabelOracle o2 = oracle_for(data);
  CHECK(estimate_learnability(16, 48, data.unlabeled(), o2, flipped, gini(), tape).error == 1.0);
  CHECK(o2.query_count() == o1.query_count());

  LabelOracle o3 = oracle_for(data);
  CHECK_THROWS(estimate_learnability(16, 48, data.unlabeled(), o3, TestSet(9), gini(), tape));
  CHECK_THROWS(estimate_learnability(16, 48, data.unlabeled(), o3, TestSet(8), gini(), tape));
}

TEST_CASE("estimator caching and order invariance") {
  RandomnessTape tape(8);
  const TargetFunction f = TargetFunction::tribes(10, 3);
  const LabeledDataset data = sample_dataset(f, 4096, 10, tape);
  auto points = tape.stream("test-points");
  TestSet test(10);
  for (int k = 0; k < 40; ++k) {
    const Point x = points.point(10);
    test.add(x, static_cast<Label>(points.uniform_below(2)));
  }
  LabelOracle base = oracle_for(data);
  const auto r = estimate_learnability(16, 32, data.unlabeled(), base, test, entropy(), tape);

  TestSet reversed(10), doubled(10);
  for (std::size_t k = test.size(); k-- > 0;) reversed.add(test.point(k), test.label(k));
  for (std::size_t k = 0; k < test.size(); ++k) {
    doubled.add(test.point(k), test.label(k));
    doubled.add(test.point(k), test.label(k));
  }
  LabelOracle o_rev = oracle_for(data);
  const auto rr = estimate_learnability(16, 32, data.unlabeled(), o_rev, reversed, entropy(), tape);
  CHECK(rr.error == r.error);
  CHECK(rr.unique_labels == r.unique_labels);
  LabelOracle o_dup = oracle_for(data);
  const auto rd = estimate_learnability(16, 32, data.unlabeled(), o_dup, doubled, entropy(), tape);
  CHECK(rd.unique_labels == r.unique_labels);
  CHECK(rd.error == r.error);

  // One test point costs the same as a single local prediction.
  TestSet single(10);
  single.add(test.point(0), test.label(0));
  LabelOracle o_one = oracle_for(data);
  LabelOracle o_local = oracle_for(data);
  estimate_learnability(16, 32, data.unlabeled(), o_one, single, entropy(), tape);
  local_learner(16, 32, data.unlabeled(), o_local, test.point(0), entropy(), tape);
  CHECK(o_one.query_count() == o_local.query_count());

  // Growing the test set costs at most b (D+1) labels per added point.
  const std::size_t depth = max_depth_for(16);
  for (std::size_t n = 1; n < 20; n *= 2) {
    TestSet small(10), big(10);
    for (std::size_t k = 0; k < n; ++k) small.add(test.point(k), test.label(k));
    for (std::size_t k = 0; k < 2 * n; ++k) big.add(test.point(k), test.label(k));
    LabelOracle a = oracle_for(data), b = oracle_for(data);
    estimate_learnability(16, 32, data.unlabeled(), a, small, entropy(), tape);
    estimate_learnability(16, 32, data.unlabeled(), b, big, entropy(), tape);
    CHECK(b.query_count() <= a.query_count() + n * 32 * (depth + 1));
  }

  const BudgetReport report = query_budget_report(base, 16, 32, test.size());
  CHECK(report.within_bound());
  CHECK(report.unique_labels == r.unique_labels);
  CHECK(report.batches == r.batches);
}
