#include "treelab/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "treelab/local.hpp"
#include "treelab/params.hpp"

namespace treelab {

EstimateResult estimate_learnability(std::size_t t, std::size_t b, const UnlabeledDataset& data, LabelOracle& oracle,
                                     const TestSet& test, const ImpurityFunction& g, const RandomnessTape& tape) {
  if (test.empty()) throw std::invalid_argument("test set must be non-empty");
  if (test.dimension() != data.dimension()) throw std::invalid_argument("test set and dataset dimensions differ");

  LocalLearner learner(t, b, data, oracle, g, tape);
  EstimateResult result;
  result.test_size = test.size();
  result.depth_cap = learner.depth_cap();
  for (std::size_t k = 0; k < test.size(); ++k) {
    const LocalPrediction p = learner.predict(test.point(k));
    if (p.label != test.label(k)) ++result.mistakes;
    result.size_estimate = p.size_estimate;
  }
  result.error = static_cast<double>(result.mistakes) / static_cast<double>(result.test_size);
  result.unique_labels = oracle.query_count();
  result.batches = oracle.batches_drawn();
  result.t_prime = static_cast<std::size_t>(std::llround(result.size_estimate));
  return result;
}

std::size_t estimator_label_bound(std::size_t t, std::size_t b, std::size_t test_size) {
  return (b + test_size) * (learner_depth_cap(t) + 1) * b + b;
}

BudgetReport query_budget_report(const LabelOracle& oracle) {
  BudgetReport r;
  r.unique_labels = oracle.query_count();
  r.batches = oracle.batches_drawn();
  r.labels_by_phase = oracle.labels_by_phase();
  r.batches_by_phase = oracle.batches_by_phase();
  return r;
}

BudgetReport query_budget_report(const LabelOracle& oracle, std::size_t t, std::size_t b, std::size_t test_size) {
  BudgetReport r = query_budget_report(oracle);
  r.bound = estimator_label_bound(t, b, test_size);
  return r;
}

}  // namespace treelab
