#include "treelab/tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace treelab {

PartialTree::PartialTree(std::size_t dimension) : dimension_(dimension) {
  check_dimension(dimension);
  nodes_.push_back(TreeNode{});
}

std::size_t PartialTree::max_depth() const {
  std::size_t depth = 0;
  for (const auto& n : nodes_) {
    if (n.is_leaf()) depth = std::max(depth, n.depth());
  }
  return depth;
}

std::pair<NodeId, NodeId> PartialTree::split(NodeId leaf, std::size_t coord) {
  if (leaf >= nodes_.size()) throw std::out_of_range("no such node");
  if (!nodes_[leaf].is_leaf()) throw std::invalid_argument("can only split a leaf");
  if (coord >= dimension_) {
    throw std::invalid_argument("split coordinate " + std::to_string(coord + 1) + " exceeds dimension");
  }
  if (nodes_[leaf].path.uses(coord)) {
    throw std::invalid_argument("coordinate " + std::to_string(coord + 1) + " already queried on this path");
  }
  const NodeId neg = nodes_.size();
  const NodeId pos = neg + 1;
  TreeNode negative;
  negative.path = nodes_[leaf].path.extended(coord, -1);
  TreeNode positive;
  positive.path = nodes_[leaf].path.extended(coord, 1);
  nodes_.push_back(std::move(negative));
  nodes_.push_back(std::move(positive));
  nodes_[leaf].coord = coord;
  nodes_[leaf].negative = neg;
  nodes_[leaf].positive = pos;
  ++leaf_count_;
  return {neg, pos};
}

NodeId PartialTree::leaf_of(const Point& x) const {
  if (x.dimension() != dimension_) {
    throw std::invalid_argument("point dimension " + std::to_string(x.dimension()) +
                                " does not match tree dimension " + std::to_string(dimension_));
  }
  NodeId id = 0;
  while (!nodes_[id].is_leaf()) {
    id = x.positive(*nodes_[id].coord) ? nodes_[id].positive : nodes_[id].negative;
  }
  return id;
}

std::vector<NodeId> PartialTree::leaves() const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{0};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    if (nodes_[id].is_leaf()) {
      out.push_back(id);
    } else {
      stack.push_back(nodes_[id].positive);
      stack.push_back(nodes_[id].negative);
    }
  }
  return out;
}

DecisionTree::DecisionTree(PartialTree shape, std::vector<Label> leaf_labels)
    : shape_(std::move(shape)), labels_(std::move(leaf_labels)) {
  if (labels_.size() != shape_.node_count()) {
    throw std::invalid_argument("label vector must have one entry per node");
  }
  for (NodeId leaf : shape_.leaves()) {
    if (labels_[leaf] > 1) throw std::invalid_argument("leaf labels must be 0 or 1");
  }
}

DecisionTree DecisionTree::constant(std::size_t dimension, Label label) {
  return DecisionTree(PartialTree(dimension), {label});
}

Label DecisionTree::evaluate(const Point& x) const { return labels_[shape_.leaf_of(x)]; }

namespace {

bool same_subtree(const DecisionTree& a, NodeId ia, const DecisionTree& b, NodeId ib) {
  const auto& na = a.shape().node(ia);
  const auto& nb = b.shape().node(ib);
  if (na.is_leaf() != nb.is_leaf()) return false;
  if (na.is_leaf()) return a.leaf_label(ia) == b.leaf_label(ib);
  return na.coord == nb.coord && same_subtree(a, na.negative, b, nb.negative) &&
         same_subtree(a, na.positive, b, nb.positive);
}

}  // namespace

bool operator==(const DecisionTree& a, const DecisionTree& b) {
  return a.dimension() == b.dimension() && same_subtree(a, 0, b, 0);
}

}  // namespace treelab
