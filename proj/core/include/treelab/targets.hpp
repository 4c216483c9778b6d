#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "treelab/dataset.hpp"
#include "treelab/tape.hpp"
#include "treelab/tree.hpp"

namespace treelab {

/// Largest dimension for which exhaustive enumeration is allowed.
inline constexpr std::size_t kMaxExhaustiveDimension = 24;

/// Synthetic target f : {-1,+1}^d -> {0,1}. A coordinate "is true" when it is +1.
class TargetFunction {
 public:
  enum class Kind { kDictator, kMajority, kTribes, kDnf, kTree, kParity, kTruthTable };

  static TargetFunction dictator(std::size_t dimension, std::size_t coord);
  /// 1 iff at least half of the coordinates are +1.
  static TargetFunction majority(std::size_t dimension);
  /// OR over consecutive width-w blocks of the AND of each block.
  static TargetFunction tribes(std::size_t dimension, std::size_t width);
  /// Monotone read-once DNF; each term is a set of 0-based coordinates and no
  /// coordinate may appear in two terms.
  static TargetFunction dnf(std::size_t dimension, std::vector<std::vector<std::size_t>> terms);
  static TargetFunction tree(DecisionTree tree);
  /// XOR of the "is +1" bits over `coords`.
  static TargetFunction parity(std::size_t dimension, std::vector<std::size_t> coords);
  /// Entry k is f at the point whose sign mask is k.
  static TargetFunction truth_table(std::size_t dimension, std::vector<Label> table);

  /// Parses the CLI mini-grammar: `dictator:3`, `majority`, `tribes:4`,
  /// `dnf:1|2&3|4&5&6`, `tree:<file>`, `xor:1,2`, `table:0110`. Coordinates
  /// are 1-based.
  static TargetFunction parse(std::string_view spec, std::size_t dimension);

  Label operator()(const Point& x) const { return evaluate(x); }
  Label evaluate(const Point& x) const;

  /// 1 - f.
  TargetFunction complement() const;

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }
  std::string describe() const;

 private:
  TargetFunction(Kind kind, std::size_t dimension) : kind_(kind), dimension_(dimension) {}

  Kind kind_;
  std::size_t dimension_;
  bool negated_ = false;
  std::size_t coord_ = 0;
  std::vector<std::uint64_t> terms_;  // DNF terms / tribes blocks as masks
  std::uint64_t parity_mask_ = 0;
  std::shared_ptr<const DecisionTree> tree_;
  std::shared_ptr<const std::vector<Label>> table_;
};

/// Exhaustive monotonicity test: every coordinate is non-decreasing or
/// non-increasing. Requires d <= kMaxExhaustiveDimension.
bool is_monotone(const TargetFunction& f);

/// n i.i.d. uniform points labeled by f, drawn from the tape stream
/// (domain "dataset", `key`).
LabeledDataset sample_dataset(const TargetFunction& f, std::size_t n, std::size_t dimension,
                              const RandomnessTape& tape, std::string_view key = "train");

/// Pr_x[f(x) != T(x)] over the uniform cube, by enumeration.
double exact_error(const TargetFunction& f, const DecisionTree& tree);

/// Monte-Carlo estimate of the same quantity from `samples` uniform points.
double sampled_error(const TargetFunction& f, const DecisionTree& tree, std::size_t samples,
                     RandomStream& stream);

/// Fraction of `test` entries the tree mislabels.
double test_error(const DecisionTree& tree, const TestSet& test);

/// Random tree with uniformly random leaf labels. Each node at depth below
/// `max_depth` splits with probability `split_probability` (the root always
/// splits when max_depth > 0).
DecisionTree random_tree(std::size_t dimension, std::size_t max_depth, double split_probability,
                         RandomStream& stream);

/// Exact decision tree for a random positive-weight threshold function over
/// `support` random coordinates; the represented function is monotone.
DecisionTree random_monotone_tree(std::size_t dimension, std::size_t support, RandomStream& stream);

}  // namespace treelab
