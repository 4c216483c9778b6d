#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treelab {

using Label = std::uint8_t;

/// Largest supported dimension; points are packed into one 64-bit word.
inline constexpr std::size_t kMaxDimension = 64;

/// A point of the boolean cube {-1,+1}^d, stored as a sign bit-vector
/// (bit i set means coordinate i is +1). Coordinates are 0-based here and
/// 1-based in every text format.
class Point {
 public:
  Point() = default;
  Point(std::size_t dimension, std::uint64_t positive_mask);

  /// Builds a point from a sequence of -1/+1 entries.
  static Point from_signs(std::span<const int> signs);

  /// Parses either a compact sign string ("+-+") or comma/space separated
  /// entries ("1,-1,1").
  static Point parse(std::string_view text);

  std::size_t dimension() const { return dimension_; }
  std::uint64_t mask() const { return mask_; }

  bool positive(std::size_t i) const { return (mask_ >> i) & 1U; }
  int sign(std::size_t i) const { return positive(i) ? 1 : -1; }

  Point with_sign(std::size_t i, int sign) const;

  /// Compact "+-+" rendering.
  std::string to_string() const;

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::size_t dimension_ = 0;
  std::uint64_t mask_ = 0;
};

/// Mask with the low `dimension` bits set.
std::uint64_t dimension_mask(std::size_t dimension);

/// Throws std::invalid_argument when the dimension is 0 or exceeds kMaxDimension.
void check_dimension(std::size_t dimension);

/// One (coordinate, sign) constraint on a root-to-leaf path.
struct PathStep {
  std::size_t coord = 0;
  int sign = 1;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

/// Root-to-leaf sequence of constraints. Its canonical encoding doubles as
/// the randomness-tape key of the leaf's minibatch.
class LeafPath {
 public:
  LeafPath() = default;
  explicit LeafPath(std::vector<PathStep> steps);

  const std::vector<PathStep>& steps() const { return steps_; }
  std::size_t depth() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  bool uses(std::size_t coord) const { return (fixed_ >> coord) & 1U; }
  bool consistent(const Point& x) const { return (x.mask() & fixed_) == value_; }

  LeafPath extended(std::size_t coord, int sign) const;

  /// "root" for the empty path, else e.g. "2+,5-" with 1-based coordinates.
  std::string encode() const;
  static LeafPath decode(std::string_view text);

  std::uint64_t fixed_mask() const { return fixed_; }
  std::uint64_t value_mask() const { return value_; }

  friend bool operator==(const LeafPath& a, const LeafPath& b) { return a.steps_ == b.steps_; }

 private:
  std::vector<PathStep> steps_;
  std::uint64_t fixed_ = 0;
  std::uint64_t value_ = 0;
};

}  // namespace treelab
