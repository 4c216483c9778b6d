#include "treelab/dataset.hpp"

#include <stdexcept>
#include <string>

namespace treelab {

namespace {

void check_point(std::size_t dimension, const Point& x) {
  if (x.dimension() != dimension) {
    throw std::invalid_argument("point dimension " + std::to_string(x.dimension()) +
                                " does not match dataset dimension " + std::to_string(dimension));
  }
}

}  // namespace

UnlabeledDataset::UnlabeledDataset(std::size_t dimension) : dimension_(dimension) {
  check_dimension(dimension);
}

UnlabeledDataset::UnlabeledDataset(std::size_t dimension, std::vector<Point> points)
    : dimension_(dimension), points_(std::move(points)) {
  check_dimension(dimension);
  for (const auto& x : points_) check_point(dimension_, x);
}

void UnlabeledDataset::add(const Point& x) {
  check_point(dimension_, x);
  points_.push_back(x);
}

LabeledDataset::LabeledDataset(std::size_t dimension) : dimension_(dimension) {
  check_dimension(dimension);
}

LabeledDataset::LabeledDataset(std::size_t dimension, std::vector<Point> points,
                               std::vector<Label> labels)
    : dimension_(dimension), points_(std::move(points)), labels_(std::move(labels)) {
  check_dimension(dimension);
  if (points_.size() != labels_.size()) {
    throw std::invalid_argument("dataset has " + std::to_string(points_.size()) + " points but " +
                                std::to_string(labels_.size()) + " labels");
  }
  for (const auto& x : points_) check_point(dimension_, x);
  for (Label y : labels_) {
    if (y > 1) throw std::invalid_argument("labels must be 0 or 1");
  }
}

void LabeledDataset::add(const Point& x, Label y) {
  check_point(dimension_, x);
  if (y > 1) throw std::invalid_argument("labels must be 0 or 1");
  points_.push_back(x);
  labels_.push_back(y);
}

UnlabeledDataset LabeledDataset::unlabeled() const { return UnlabeledDataset(dimension_, points_); }

}  // namespace treelab
