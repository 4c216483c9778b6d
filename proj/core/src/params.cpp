#include "treelab/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treelab {

namespace {

bool in_open_half(double v) { return v > 0.0 && v < 0.5; }

std::size_t ceil_size(double v) {
  if (!std::isfinite(v) || v < 0.0 || v > 1e18) throw std::overflow_error("parameter value out of range");
  return static_cast<std::size_t>(std::ceil(v));
}

}  // namespace

void TheoryParams::validate() const {
  if (!in_open_half(epsilon)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  if (!in_open_half(delta)) throw std::invalid_argument("delta must lie in (0, 1/2)");
  if (!in_open_half(eta)) throw std::invalid_argument("eta must lie in (0, 1/2)");
  if (s < 2) throw std::invalid_argument("s must be at least 2");
  if (t < 2) throw std::invalid_argument("t must be at least 2");
  if (d < 1) throw std::invalid_argument("d must be positive");
  if (!(slack.minibatch > 0 && slack.dataset > 0 && slack.local > 0)) {
    throw std::invalid_argument("slack multipliers must be positive");
  }
}

std::size_t max_depth_for(std::size_t t) {
  if (t < 2) throw std::invalid_argument("max depth needs t >= 2");
  const double lg = std::log2(static_cast<double>(t));
  return static_cast<std::size_t>(std::floor(lg + std::log2(lg)));
}

std::size_t min_batch_size(const ImpurityFunction& g, double accuracy, std::size_t t, std::size_t d, double delta) {
  if (!(accuracy > 0.0)) throw std::invalid_argument("accuracy must be positive");
  const double factor =
      std::max(8.0, 2.0 * std::pow(2.0 * g.holder_constant() / accuracy, 2.0 / g.holder_exponent()));
  return ceil_size(factor * std::log(9.0 * static_cast<double>(t) * static_cast<double>(d) / delta));
}

std::size_t balance_batch_size(std::size_t t, std::size_t d, double delta) {
  return ceil_size(8.0 * std::log(3.0 * static_cast<double>(t) * static_cast<double>(d) / delta));
}

std::size_t size_estimator_samples(std::size_t max_leaf_depth, double accuracy, double delta) {
  if (!(accuracy > 0.0)) throw std::invalid_argument("accuracy must be positive");
  const double width = std::ldexp(1.0, static_cast<int>(max_leaf_depth));
  return ceil_size(width * width / (2.0 * accuracy * accuracy) * std::log(2.0 / delta));
}

std::size_t local_batch_size(std::size_t t, double eta, double delta, double slack) {
  if (t < 2) throw std::invalid_argument("local batch size needs t >= 2");
  const double lg = std::log2(static_cast<double>(t));
  return ceil_size(slack * lg * lg / (eta * eta) * std::log2(static_cast<double>(t) / delta));
}

RecommendedParams recommended_params(const TheoryParams& p, const ImpurityFunction& g) {
  p.validate();
  const double log_s = std::log2(static_cast<double>(p.s));
  const double kappa = g.strong_concavity();
  const double td = static_cast<double>(p.t) * static_cast<double>(p.d);

  RecommendedParams r;
  r.max_depth = max_depth_for(p.t);
  r.gain_accuracy = kappa / 320.0 * std::pow(p.epsilon / log_s, 2.0);

  const double core = std::pow(g.holder_constant() * g.holder_constant() * std::pow(log_s, 4.0) /
                                   (kappa * kappa * std::pow(p.epsilon, 4.0)),
                               1.0 / g.holder_exponent());
  const double log_term = std::log2(td / p.delta);
  r.minibatch = ceil_size(p.slack.minibatch * core * log_term);
  r.min_batch = min_batch_size(g, r.gain_accuracy, p.t, p.d, p.delta);
  r.dataset_size = ceil_size(p.slack.dataset * static_cast<double>(p.t) * core * log_term *
                             std::log2(static_cast<double>(p.t)));
  r.local_batch = local_batch_size(p.t, p.eta, p.delta, p.slack.local);
  r.strand_samples = size_estimator_samples(r.max_depth + 1, p.eta * static_cast<double>(p.t), p.delta);
  return r;
}

}  // namespace treelab
