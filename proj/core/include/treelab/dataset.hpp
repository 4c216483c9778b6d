#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "treelab/point.hpp"

namespace treelab {

/// Points of {-1,+1}^d without labels. Labels are revealed through a
/// LabelOracle.
class UnlabeledDataset {
 public:
  explicit UnlabeledDataset(std::size_t dimension);
  UnlabeledDataset(std::size_t dimension, std::vector<Point> points);

  void add(const Point& x);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const { return points_; }

 private:
  std::size_t dimension_;
  std::vector<Point> points_;
};

/// Points with {0,1} labels. Also serves as a test set; labels there need
/// not agree with any target.
class LabeledDataset {
 public:
  explicit LabeledDataset(std::size_t dimension);
  LabeledDataset(std::size_t dimension, std::vector<Point> points, std::vector<Label> labels);

  void add(const Point& x, Label y);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  Label label(std::size_t i) const { return labels_[i]; }
  std::span<const Point> points() const { return points_; }
  std::span<const Label> labels() const { return labels_; }

  UnlabeledDataset unlabeled() const;

 private:
  std::size_t dimension_;
  std::vector<Point> points_;
  std::vector<Label> labels_;
};

using TestSet = LabeledDataset;

}  // namespace treelab
