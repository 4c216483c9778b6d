#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treelab/point.hpp"

namespace treelab {

/// Meters label access to an unlabeled dataset. Each dataset index costs one
/// query the first time it is revealed; repeats are served from the cache.
class LabelOracle {
 public:
  using Labeler = std::function<Label(std::size_t index)>;

  /// Hidden label table, one entry per dataset index.
  explicit LabelOracle(std::vector<Label> table);
  /// Labels computed on demand (for example by evaluating a target).
  explicit LabelOracle(Labeler labeler);

  /// Reveals the label of `index`, charging `phase` if it is new.
  Label label(std::size_t index, std::string_view phase = "default");

  bool revealed(std::size_t index) const { return cache_.contains(index); }

  /// Number of distinct indices revealed so far.
  std::size_t query_count() const { return cache_.size(); }

  /// Records that a minibatch was labeled (for budget reports).
  void note_batch(std::string_view phase = "default");
  std::size_t batches_drawn() const { return batches_; }

  const std::map<std::string, std::size_t, std::less<>>& labels_by_phase() const { return phase_labels_; }
  const std::map<std::string, std::size_t, std::less<>>& batches_by_phase() const { return phase_batches_; }

 private:
  Labeler labeler_;
  std::unordered_map<std::size_t, Label> cache_;
  std::size_t batches_ = 0;
  std::map<std::string, std::size_t, std::less<>> phase_labels_;
  std::map<std::string, std::size_t, std::less<>> phase_batches_;
};

}  // namespace treelab
