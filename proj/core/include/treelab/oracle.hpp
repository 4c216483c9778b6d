#pragma once

// Brute-force references for tests and the `verify` command. Everything here
// is recomputed from the definitions by enumeration and deliberately avoids
// the learners' own scoring code.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "treelab/impurity.hpp"
#include "treelab/targets.hpp"
#include "treelab/trace.hpp"
#include "treelab/tree.hpp"

namespace treelab::oracle {

/// T(x) by scanning every leaf for the one whose path constraints x meets.
Label scan_evaluate(const DecisionTree& tree, const Point& x);

/// Local gain of a labeled sample, straight from the three conditional means.
double definition_local_gain(const ImpurityFunction& g, std::span<const Point> points, std::span<const Label> labels,
                             std::size_t coord);

/// Exact local gain at `leaf` by enumerating the whole cube.
double exhaustive_local_gain(const ImpurityFunction& g, const TargetFunction& f, const LeafPath& leaf,
                             std::size_t coord);

/// Exact G-impurity of a partial tree by enumerating the whole cube.
double exhaustive_impurity(const ImpurityFunction& g, const TargetFunction& f, const PartialTree& tree);

/// Splitting `leaf` on `coord` lowers the G-impurity by exactly its true
/// purity gain (to `tolerance`).
bool check_telescoping(const ImpurityFunction& g, const TargetFunction& f, const PartialTree& tree, NodeId leaf,
                       std::size_t coord, double tolerance = 1e-12);

struct ShallowPrefix {
  std::size_t k = 0;
  std::size_t shallow = 0;  ///< #{j <= k : depth_j < log2 j - 2}
};

/// Counts at every power-of-two prefix length k of the trace.
std::vector<ShallowPrefix> shallow_split_counts(const RunTrace& trace);
/// True iff every power-of-two prefix has at most k/4 shallow splits.
bool check_shallow_splits(const RunTrace& trace);

/// Sum over the cube of 2^(depth of the leaf reached).
std::uint64_t exact_size_sum(const PartialTree& tree);
/// E_x[2^depth] over the uniform cube; equals the leaf count.
double exact_size_expectation(const PartialTree& tree);

struct ConcentrationConfig {
  TargetFunction target;
  LeafPath leaf;
  std::size_t batch_size = 0;
  /// Balance: each side of every free coordinate needs at least min_batch/4
  /// points. Defaults to batch_size when 0.
  std::size_t min_batch = 0;
  double accuracy = 0.0;  ///< Delta for the gain check
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

struct ConcentrationResult {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double rate() const { return trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0; }
};

/// Batches of i.i.d. uniform points reaching the leaf; a trial fails when
/// some coordinate off the path has fewer than min_batch/4 points on a side.
ConcentrationResult batch_balance_trials(const ConcentrationConfig& config);

/// Same batches, labeled by the target; a trial fails when some coordinate
/// off the path has |estimated - true local gain| > accuracy.
ConcentrationResult gain_accuracy_trials(const ImpurityFunction& g, const ConcentrationConfig& config);

}  // namespace treelab::oracle
