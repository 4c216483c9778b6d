#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "treelab/dataset.hpp"
#include "treelab/impurity.hpp"
#include "treelab/label_oracle.hpp"
#include "treelab/learners.hpp"
#include "treelab/tape.hpp"
#include "treelab/tree.hpp"

namespace treelab {

/// e = mean over the strand points of 2^(depth of their leaf). Unbiased for
/// the leaf count when the points are uniform. Throws on an empty set.
double estimate_size(const PartialTree& tree, std::span<const Point> strands);

/// Label budget of one local prediction: ((b+1)(D+1) + 1) b.
std::size_t local_label_bound(std::size_t t, std::size_t b);

struct LocalPrediction {
  Label label = 0;
  LeafPath leaf;                 ///< leaf of x in the would-be tree
  double size_estimate = 1.0;    ///< final e
  std::size_t splits = 0;        ///< strand-relevant splits replayed
  std::size_t new_labels = 0;    ///< oracle queries charged by this call
};

/// Answers T(x) for the tree the size-estimate learner would build on the
/// fully labeled dataset, growing only the strands of x and of the b strand
/// points. Leaf records persist across calls, so later predictions reuse the
/// splits and labels of earlier ones.
class LocalLearner {
 public:
  LocalLearner(std::size_t t, std::size_t b, const UnlabeledDataset& data, LabelOracle& oracle,
               const ImpurityFunction& g, const RandomnessTape& tape,
               std::optional<std::vector<Point>> strands = std::nullopt);

  LocalPrediction predict(const Point& x);
  Label operator()(const Point& x) { return predict(x).label; }

  std::size_t depth_cap() const { return depth_cap_; }
  const std::vector<Point>& strands() const { return strands_; }
  /// Leaves materialized so far.
  std::size_t cached_leaves() const { return cache_->size(); }

 private:
  std::size_t t_;
  std::size_t b_;
  const UnlabeledDataset& data_;
  LabelOracle& oracle_;
  ImpurityFunction g_;
  RandomnessTape tape_;
  std::size_t depth_cap_;
  std::vector<Point> strands_;
  std::shared_ptr<LeafCache> cache_;
};

/// One-shot local prediction with a fresh leaf cache (the oracle's label
/// cache still applies).
Label local_learner(std::size_t t, std::size_t b, const UnlabeledDataset& data, LabelOracle& oracle,
                    const Point& x, const ImpurityFunction& g, const RandomnessTape& tape);

}  // namespace treelab
