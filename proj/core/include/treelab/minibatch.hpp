#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "treelab/dataset.hpp"
#include "treelab/tape.hpp"

namespace treelab {

/// Up to b distinct dataset entries consistent with one leaf.
struct Minibatch {
  LeafPath leaf;
  std::vector<std::size_t> indices;
  std::vector<Point> points;
  /// Empty for batches drawn from an unlabeled dataset.
  std::vector<Label> labels;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  bool labeled() const { return labels.size() == indices.size(); }
};

/// Chooses min(b, |pool|) entries of `pool` uniformly without replacement by
/// a partial Fisher-Yates shuffle driven by `stream`. The pool is taken in
/// the order given.
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t b,
                                                    RandomStream& stream);

/// Indices of `points` consistent with `leaf`, in ascending order.
std::vector<std::size_t> consistent_indices(std::span<const Point> points, const LeafPath& leaf);

/// Batch_b(points, leaf): selection from an already computed ascending
/// consistent-index pool, keyed on the tape by (domain "batch", key).
std::vector<std::size_t> draw_batch_indices(std::vector<std::size_t> consistent_pool, std::size_t b,
                                            const RandomnessTape& tape, std::string_view key);

/// Draws a labeled minibatch for `leaf`. `key` defaults to the leaf's
/// canonical encoding. Throws if b == 0.
Minibatch draw_minibatch(const LabeledDataset& dataset, const LeafPath& leaf, std::size_t b,
                         const RandomnessTape& tape, std::string_view key = {});

/// Same selection over an unlabeled dataset; labels stay empty.
Minibatch draw_minibatch(const UnlabeledDataset& dataset, const LeafPath& leaf, std::size_t b,
                         const RandomnessTape& tape, std::string_view key = {});

}  // namespace treelab
