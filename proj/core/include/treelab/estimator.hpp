#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "treelab/dataset.hpp"
#include "treelab/impurity.hpp"
#include "treelab/label_oracle.hpp"
#include "treelab/tape.hpp"

namespace treelab {

struct EstimateResult {
  double error = 0.0;          ///< mistakes / test_size
  std::size_t mistakes = 0;
  std::size_t test_size = 0;
  std::size_t unique_labels = 0;
  std::size_t batches = 0;
  /// Size of the would-be tree as seen through the strands: round(e).
  std::size_t t_prime = 0;
  double size_estimate = 1.0;
  std::size_t depth_cap = 0;
};

/// Test error of the tree the size-estimate learner would build on the
/// labeled version of `data`, computed point by point with the local
/// learner. All predictions share one tape, one oracle and one leaf cache.
EstimateResult estimate_learnability(std::size_t t, std::size_t b, const UnlabeledDataset& data, LabelOracle& oracle,
                                     const TestSet& test, const ImpurityFunction& g, const RandomnessTape& tape);

/// (b + |S_test|)(D+1) b + b.
std::size_t estimator_label_bound(std::size_t t, std::size_t b, std::size_t test_size);

struct BudgetReport {
  std::size_t unique_labels = 0;
  std::size_t batches = 0;
  std::map<std::string, std::size_t, std::less<>> labels_by_phase;
  std::map<std::string, std::size_t, std::less<>> batches_by_phase;
  std::optional<std::size_t> bound;

  bool within_bound() const { return !bound || unique_labels <= *bound; }
};

BudgetReport query_budget_report(const LabelOracle& oracle);
/// Same, with the estimator's label bound for (t, b, |S_test|) attached.
BudgetReport query_budget_report(const LabelOracle& oracle, std::size_t t, std::size_t b, std::size_t test_size);

}  // namespace treelab
