#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treelab/minibatch.hpp"
#include "treelab/targets.hpp"
#include "treelab/tree.hpp"

namespace treelab {

/// Concave splitting criterion G : [0,1] -> [0,1] together with the
/// smoothness metadata used by the sample-size formulas:
/// |G(a) - G(b)| <= C |a - b|^alpha and
/// (G(a) + G(b))/2 <= G((a+b)/2) - (kappa/2)(b - a)^2.
class ImpurityFunction {
 public:
  ImpurityFunction(std::string name, std::function<double(double)> g, double holder_constant,
                   double holder_exponent, double strong_concavity);

  const std::string& name() const { return name_; }
  double operator()(double p) const { return g_(p); }

  double holder_constant() const { return holder_constant_; }
  double holder_exponent() const { return holder_exponent_; }
  double strong_concavity() const { return strong_concavity_; }

  /// factor * G, with the metadata scaled accordingly.
  ImpurityFunction scaled(double factor) const;

 private:
  std::string name_;
  std::function<double(double)> g_;
  double holder_constant_;
  double holder_exponent_;
  double strong_concavity_;
};

/// 4p(1-p).
ImpurityFunction gini();
/// Binary entropy in bits, with 0 log 0 = 0.
ImpurityFunction entropy();
/// 2 sqrt(p(1-p)).
ImpurityFunction kearns_mansour();

std::vector<ImpurityFunction> builtin_impurities();
/// `gini` | `entropy` | `kearns-mansour`.
ImpurityFunction impurity_by_name(std::string_view name);

/// Label counts on either side of a candidate split.
struct SplitCounts {
  std::size_t negative_total = 0;
  std::size_t negative_ones = 0;
  std::size_t positive_total = 0;
  std::size_t positive_ones = 0;

  std::size_t total() const { return negative_total + positive_total; }
  std::size_t ones() const { return negative_ones + positive_ones; }
};

/// G(E[y]) - (G(E[y | x_i = -1]) + G(E[y | x_i = +1])) / 2 from counts.
/// Returns 0 when one side is empty; throws when both are.
double local_gain(const ImpurityFunction& g, const SplitCounts& counts);

SplitCounts split_counts(std::span<const Point> points, std::span<const Label> labels, std::size_t coord);

/// Local gain of splitting on `coord`, estimated from a labeled batch.
double local_gain(const ImpurityFunction& g, const Minibatch& batch, std::size_t coord);

/// 2^-depth * local_gain.
double purity_gain(const ImpurityFunction& g, const Minibatch& batch, std::size_t leaf_depth, std::size_t coord);

struct LeafScore {
  std::size_t coord = 0;
  double gain = 0.0;  ///< purity gain
};

/// Best split of a leaf from its labeled batch: maximal purity gain, ties to
/// the smaller coordinate. nullopt when the batch is empty or every
/// coordinate is already on the path.
std::optional<LeafScore> best_split(const ImpurityFunction& g, std::span<const Point> points,
                                    std::span<const Label> labels, const LeafPath& leaf, std::size_t dimension);

/// Exact local gain under the uniform distribution on points reaching `leaf`.
/// Throws if `coord` is on the path.
double true_local_gain(const ImpurityFunction& g, const TargetFunction& f, const LeafPath& leaf, std::size_t coord);
double true_purity_gain(const ImpurityFunction& g, const TargetFunction& f, const LeafPath& leaf, std::size_t coord);

/// Sum over leaves of 2^-|leaf| G(E[f | leaf]).
double g_impurity(const ImpurityFunction& g, const TargetFunction& f, const PartialTree& tree);

}  // namespace treelab
