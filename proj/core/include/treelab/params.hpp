#pragma once

#include <cstddef>

#include "treelab/impurity.hpp"

namespace treelab {

/// Multipliers standing in for the hidden constants of each asymptotic formula.
struct SlackMultipliers {
  double minibatch = 1.0;  ///< b of the learning guarantee
  double dataset = 1.0;    ///< n
  double local = 1.0;      ///< b of the local learner
};

struct TheoryParams {
  std::size_t s = 2;
  std::size_t t = 2;
  std::size_t d = 1;
  double epsilon = 0.1;
  double delta = 0.1;
  double eta = 0.25;
  SlackMultipliers slack;

  /// Throws std::invalid_argument unless epsilon, delta, eta lie in (0, 1/2),
  /// s, t >= 2 and d >= 1.
  void validate() const;
};

struct RecommendedParams {
  std::size_t max_depth = 0;   ///< D
  double gain_accuracy = 0.0;  ///< Delta = kappa/320 (epsilon / log s)^2
  std::size_t minibatch = 0;   ///< b for the learning guarantee
  std::size_t min_batch = 0;   ///< b_min for local-gain accuracy Delta
  std::size_t dataset_size = 0;
  std::size_t local_batch = 0;       ///< b for the local learner
  std::size_t strand_samples = 0;    ///< m for size accuracy eta t at depth D
};

/// floor(log2 t + log2 log2 t). Throws for t < 2.
std::size_t max_depth_for(std::size_t t);

/// Depth cap used by the learners: max_depth_for(t), or 0 when t < 2 (a
/// size-1 run never splits).
inline std::size_t learner_depth_cap(std::size_t t) { return t >= 2 ? max_depth_for(t) : 0; }

/// ceil(max(8, 2 (2C/Delta)^(2/alpha)) ln(9td/delta)).
std::size_t min_batch_size(const ImpurityFunction& g, double accuracy, std::size_t t, std::size_t d, double delta);

/// ceil(8 ln(3td/delta)): smallest b_min at which batches stay balanced w.h.p.
std::size_t balance_batch_size(std::size_t t, std::size_t d, double delta);

/// ceil((2^depth)^2 / (2 accuracy^2) ln(2/delta)): strands needed so a size
/// estimate over a tree of that max depth is within `accuracy` w.p. 1-delta.
std::size_t size_estimator_samples(std::size_t max_leaf_depth, double accuracy, double delta);

/// ceil(slack (log2 t)^2 / eta^2 log2(t/delta)).
std::size_t local_batch_size(std::size_t t, double eta, double delta, double slack = 1.0);

RecommendedParams recommended_params(const TheoryParams& p, const ImpurityFunction& g);

}  // namespace treelab
