#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "treelab/point.hpp"

namespace treelab {

using NodeId = std::size_t;

struct TreeNode {
  /// Queried coordinate for internal nodes; nullopt for leaves.
  std::optional<std::size_t> coord;
  NodeId negative = 0;
  NodeId positive = 0;
  LeafPath path;

  bool is_leaf() const { return !coord.has_value(); }
  std::size_t depth() const { return path.depth(); }
};

/// Decision tree skeleton over {-1,+1}^d with unlabeled leaves. Nodes are
/// stored in creation order; node 0 is the root.
class PartialTree {
 public:
  explicit PartialTree(std::size_t dimension);

  std::size_t dimension() const { return dimension_; }
  NodeId root() const { return 0; }
  const TreeNode& node(NodeId id) const { return nodes_.at(id); }
  std::size_t node_count() const { return nodes_.size(); }

  /// Number of leaves.
  std::size_t size() const { return leaf_count_; }
  std::size_t max_depth() const;

  /// Replaces leaf `leaf` by a query to `coord`; returns (negative, positive)
  /// children. Throws if `leaf` is internal or `coord` is already on its path.
  std::pair<NodeId, NodeId> split(NodeId leaf, std::size_t coord);

  /// The unique leaf x reaches. Throws on dimension mismatch.
  NodeId leaf_of(const Point& x) const;
  const LeafPath& leaf_path_of(const Point& x) const { return node(leaf_of(x)).path; }

  /// Leaves in depth-first order, negative branch first.
  std::vector<NodeId> leaves() const;

 private:
  std::size_t dimension_;
  std::vector<TreeNode> nodes_;
  std::size_t leaf_count_ = 1;
};

/// A partial tree whose leaves carry {0,1} labels.
class DecisionTree {
 public:
  /// `leaf_labels` is indexed by node id; entries of internal nodes are ignored.
  DecisionTree(PartialTree shape, std::vector<Label> leaf_labels);

  static DecisionTree constant(std::size_t dimension, Label label);

  const PartialTree& shape() const { return shape_; }
  std::size_t dimension() const { return shape_.dimension(); }
  std::size_t size() const { return shape_.size(); }
  Label leaf_label(NodeId leaf) const { return labels_.at(leaf); }

  /// T(x). Throws on dimension mismatch.
  Label evaluate(const Point& x) const;

  /// Structural equality (same queries and labels, regardless of node order).
  friend bool operator==(const DecisionTree& a, const DecisionTree& b);

 private:
  PartialTree shape_;
  std::vector<Label> labels_;
};

/// round(p) = 1[p >= 1/2], evaluated exactly on counts.
inline Label round_mean(std::size_t ones, std::size_t total) {
  return (total > 0 && 2 * ones >= total) ? Label{1} : Label{0};
}

}  // namespace treelab
