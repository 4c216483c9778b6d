#include <cmath>

#include "doctest.h"
#include "treelab/impurity.hpp"
#include "treelab/io.hpp"
#include "treelab/oracle.hpp"
#include "treelab/params.hpp"

using namespace treelab;

namespace {

Minibatch truth_table_batch(const TargetFunction& f) {
  const std::size_t d = f.dimension();
  Minibatch batch;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) {
    batch.indices.push_back(m);
    batch.points.emplace_back(d, m);
    batch.labels.push_back(f(Point(d, m)));
  }
  return batch;
}

}  // namespace

TEST_CASE("builtin impurity values") {
  CHECK(gini()(0.5) == 1.0);
  CHECK(entropy()(0.25) == doctest::Approx(2.0 - 0.75 * std::log2(3.0)).epsilon(1e-12));
  CHECK(entropy()(0.25) == doctest::Approx(0.811278).epsilon(1e-6));
  CHECK(kearns_mansour()(0.0) == 0.0);
  CHECK(kearns_mansour()(0.5) == 1.0);
  CHECK(builtin_impurities().size() == 3);
  CHECK(impurity_by_name("entropy").name() == "entropy");
  CHECK_THROWS(impurity_by_name("misclassification"));
}

TEST_CASE("impurity axioms on a grid") {
  for (const ImpurityFunction& g : builtin_impurities()) {
    CAPTURE(g.name());
    CHECK(g(0.0) == 0.0);
    CHECK(g(1.0) == 0.0);
    CHECK(g(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    const double kappa = g.strong_concavity();
    for (int a = 0; a <= 1024; a += 8) {
      const double pa = a / 1024.0;
      REQUIRE(std::abs(g(pa) - g(1.0 - pa)) <= 1e-12);
      for (int b = a; b <= 1024; b += 8) {
        const double pb = b / 1024.0;
        const double mid = g((pa + pb) / 2.0);
        const double avg = (g(pa) + g(pb)) / 2.0;
        REQUIRE(avg <= mid + 1e-12);
        // strong concavity with the recorded kappa
        REQUIRE(avg <= mid - kappa / 2.0 * (pb - pa) * (pb - pa) + 1e-12);
        REQUIRE(std::abs(g(pa) - g(pb)) <= g.holder_constant() * std::pow(pb - pa, g.holder_exponent()) + 1e-12);
      }
    }
  }
}

TEST_CASE("recorded kappa is tight for Gini") {
  // Midpoint deficit of 4p(1-p) is exactly (b-a)^2, so kappa = 2.
  const ImpurityFunction g = gini();
  const double a = 0.1, b = 0.7;
  const double deficit = g((a + b) / 2) - (g(a) + g(b)) / 2;
  CHECK(deficit == doctest::Approx(g.strong_concavity() / 2 * (b - a) * (b - a)).epsilon(1e-12));
}

TEST_CASE("local gain from batches") {
  const Minibatch dict = truth_table_batch(TargetFunction::dictator(2, 0));
  CHECK(local_gain(gini(), dict, 0) == 1.0);
  const Minibatch parity = truth_table_batch(TargetFunction::parity(2, {0, 1}));
  for (const auto& g : builtin_impurities()) CHECK(local_gain(g, parity, 0) == 0.0);

  CHECK_THROWS(local_gain(gini(), Minibatch{}, 0));
  Minibatch one_sided;
  one_sided.indices = {0, 1};
  one_sided.points = {Point::parse("++"), Point::parse("+-")};
  one_sided.labels = {0, 1};
  CHECK(local_gain(gini(), one_sided, 0) == 0.0);

  CHECK(purity_gain(gini(), dict, 0, 0) == 1.0);
  Minibatch half = dict;
  CHECK(purity_gain(gini(), half, 3, 0) == 0.125);
}

TEST_CASE("local gain matches the definition on random batches") {
  RandomnessTape tape(17);
  auto stream = tape.stream("test");
  for (int trial = 0; trial < 20; ++trial) {
    Minibatch batch;
    for (int k = 0; k < 64; ++k) {
      batch.indices.push_back(static_cast<std::size_t>(k));
      batch.points.push_back(stream.point(8));
      batch.labels.push_back(static_cast<Label>(stream.uniform_below(2)));
    }
    for (const auto& g : builtin_impurities()) {
      for (std::size_t i = 0; i < 8; ++i) {
        REQUIRE(std::abs(local_gain(g, batch, i) - oracle::definition_local_gain(g, batch.points, batch.labels, i)) <=
                1e-12);
      }
    }
  }
}

TEST_CASE("true local gain examples") {
  const TargetFunction dict = TargetFunction::dictator(4, 0);
  CHECK(true_local_gain(gini(), dict, LeafPath(), 0) == 1.0);
  for (const auto& g : builtin_impurities()) CHECK(true_local_gain(g, dict, LeafPath(), 2) == 0.0);
  CHECK(true_local_gain(gini(), TargetFunction::majority(3), LeafPath(), 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS(true_local_gain(gini(), dict, LeafPath().extended(1, 1), 1));
  const TargetFunction maj = TargetFunction::majority(6);
  const LeafPath leaf = LeafPath().extended(2, -1).extended(4, 1);
  for (std::size_t i : {0, 1, 3, 5}) {
    CHECK(true_local_gain(entropy(), maj, leaf, i) ==
          doctest::Approx(oracle::exhaustive_local_gain(entropy(), maj, leaf, i)).epsilon(1e-12));
  }
}

TEST_CASE("exact gains are non-negative") {
  RandomnessTape tape(23);
  auto stream = tape.stream("test");
  for (int trial = 0; trial < 20; ++trial) {
    const TargetFunction f = TargetFunction::tree(random_tree(7, 5, 0.7, stream));
    for (const auto& g : builtin_impurities()) {
      for (std::size_t i = 1; i < 7; ++i) REQUIRE(true_local_gain(g, f, LeafPath().extended(0, 1), i) >= -1e-12);
    }
  }
}

TEST_CASE("g_impurity examples") {
  PartialTree empty(3);
  CHECK(g_impurity(gini(), TargetFunction::dictator(3, 0), empty) == 1.0);
  PartialTree split(3);
  split.split(split.root(), 0);
  CHECK(g_impurity(gini(), TargetFunction::dictator(3, 0), split) == 0.0);
  CHECK(g_impurity(entropy(), TargetFunction::majority(3), empty) ==
        doctest::Approx(oracle::exhaustive_impurity(entropy(), TargetFunction::majority(3), empty)));
}

TEST_CASE("best split is invariant under positive scaling") {
  RandomnessTape tape(29);
  auto stream = tape.stream("test");
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point> pts;
    std::vector<Label> labels;
    for (int k = 0; k < 40; ++k) {
      pts.push_back(stream.point(6));
      labels.push_back(static_cast<Label>(pts.back().positive(0) ^ (stream.uniform_below(4) == 0)));
    }
    for (const auto& g : builtin_impurities()) {
      const auto base = best_split(g, pts, labels, LeafPath(), 6);
      const auto scaled = best_split(g.scaled(3.5), pts, labels, LeafPath(), 6);
      REQUIRE(base.has_value());
      REQUIRE(scaled.has_value());
      CHECK(base->coord == scaled->coord);
    }
  }
}

TEST_CASE("parameter calculator") {
  CHECK(max_depth_for(16) == 6);
  CHECK(max_depth_for(1024) == 13);
  CHECK(max_depth_for(2) == 1);
  CHECK_THROWS(max_depth_for(1));
  CHECK(size_estimator_samples(3, 1.0, 0.1) == 96);
  CHECK(local_batch_size(32, 0.25, 0.1) == 3329);

  TheoryParams p;
  p.s = 4;
  p.t = 64;
  p.d = 10;
  p.epsilon = 0.25;
  const RecommendedParams r = recommended_params(p, gini());
  CHECK(r.max_depth == 8);
  CHECK(r.gain_accuracy == doctest::Approx(2.0 / 320.0 * std::pow(0.125, 2)));
  CHECK(r.min_batch == min_batch_size(gini(), r.gain_accuracy, 64, 10, 0.1));
  CHECK(r.minibatch > 0);
  CHECK(r.dataset_size > r.minibatch);
  p.t = 1;
  CHECK_THROWS(recommended_params(p, gini()));
  p.t = 64;
  p.epsilon = 0.5;
  CHECK_THROWS(recommended_params(p, gini()));
}
