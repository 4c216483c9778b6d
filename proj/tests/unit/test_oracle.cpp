#include "doctest.h"
#include "treelab/impurity.hpp"
#include "treelab/io.hpp"
#include "treelab/learners.hpp"
#include "treelab/oracle.hpp"
#include "treelab/params.hpp"

using namespace treelab;

TEST_CASE("telescoping on simple splits") {
  const TargetFunction dict = TargetFunction::dictator(4, 0);
  PartialTree root(4);
  CHECK(oracle::check_telescoping(gini(), dict, root, root.root(), 0));
  CHECK(oracle::exhaustive_impurity(gini(), dict, root) == 1.0);

  PartialTree split(4);
  const auto [neg, pos] = split.split(split.root(), 0);
  CHECK(oracle::exhaustive_impurity(gini(), dict, split) == 0.0);
  // Pure leaves: nothing changes and the gain is 0.
  CHECK(oracle::check_telescoping(gini(), dict, split, pos, 2));
  CHECK(oracle::exhaustive_local_gain(gini(), dict, split.node(neg).path, 1) == 0.0);
}

TEST_CASE("telescoping on random triples") {
  RandomnessTape tape(19);
  auto stream = tape.stream("test");
  for (int k = 0; k < 30; ++k) {
    const TargetFunction f = TargetFunction::tree(random_tree(8, 5, 0.7, stream));
    const PartialTree shape = random_tree(8, 4, 0.6, stream).shape();
    const auto leaves = shape.leaves();
    const NodeId leaf = leaves[stream.uniform_below(leaves.size())];
    std::size_t coord = 0;
    do {
      coord = stream.uniform_below(8);
    } while (shape.node(leaf).path.uses(coord));
    for (const auto& g : builtin_impurities()) REQUIRE(oracle::check_telescoping(g, f, shape, leaf, coord));
  }
}

TEST_CASE("shallow split checker") {
  RunTrace tiny;
  tiny.append({1, LeafPath(), 0, 1.0, 1.0});
  CHECK(oracle::check_shallow_splits(tiny));

  // Balanced growth: split every leaf of a level before going deeper.
  RunTrace balanced;
  PartialTree tree(10);
  std::size_t j = 0;
  for (int level = 0; level < 5; ++level) {
    for (NodeId leaf : tree.leaves()) {
      const LeafPath path = tree.node(leaf).path;
      tree.split(leaf, static_cast<std::size_t>(level));
      balanced.append({++j, path, static_cast<std::size_t>(level), 0.1, 1.0});
    }
  }
  for (const auto& p : oracle::shallow_split_counts(balanced)) CHECK(p.shallow == 0);
  CHECK(oracle::check_shallow_splits(balanced));

  // Eight depth-0 splits: j = 5..8 satisfy 2^2 < j, so 4 of the first 8
  // are shallow, above k/4 = 2.
  RunTrace bad;
  for (std::size_t i = 1; i <= 8; ++i) bad.append({i, LeafPath(), 0, 0.1, 1.0});
  const auto counts = oracle::shallow_split_counts(bad);
  CHECK(counts.back().k == 8);
  CHECK(counts.back().shallow == 4);
  CHECK_FALSE(oracle::check_shallow_splits(bad));
}

TEST_CASE("exact size expectation") {
  CHECK(oracle::exact_size_expectation(PartialTree(4)) == 1.0);
  const DecisionTree t3 = parse_tree("(split 1 (leaf 0) (split 2 (leaf 1) (leaf 0)))", 2);
  CHECK(oracle::exact_size_expectation(t3.shape()) == 3.0);
  RandomnessTape tape(2);
  auto stream = tape.stream("test");
  for (int k = 0; k < 20; ++k) {
    const PartialTree shape = random_tree(12, 9, 0.6, stream).shape();
    REQUIRE(oracle::exact_size_sum(shape) == shape.size() * 4096);
  }
}

TEST_CASE("concentration checks") {
  oracle::ConcentrationConfig config{TargetFunction::dictator(8, 0), LeafPath().extended(3, 1), 0, 0, 0.1, 200, 1};
  config.batch_size = balance_batch_size(16, 8, 0.1);
  CHECK(oracle::batch_balance_trials(config).rate() <= 0.2);

  config.batch_size = 4;
  config.min_batch = 64;
  CHECK(oracle::batch_balance_trials(config).rate() == 1.0);

  config.batch_size = min_batch_size(gini(), 0.5, 16, 8, 0.1);
  config.min_batch = 0;
  config.accuracy = 0.5;
  CHECK(oracle::gain_accuracy_trials(gini(), config).rate() <= 0.2);
}
