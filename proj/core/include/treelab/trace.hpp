#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "treelab/point.hpp"

namespace treelab {

/// One split made by a learner.
struct TraceRecord {
  std::size_t iteration = 0;  ///< 1-based
  LeafPath leaf;
  std::size_t coord = 0;  ///< 0-based
  double gain = 0.0;      ///< estimated purity gain of the split
  double size_estimate = 0.0;

  std::size_t depth() const { return leaf.depth(); }
};

/// Ordered split history. Appending enforces consecutive iteration indices
/// and, when a depth cap is set, that no split exceeds it.
class RunTrace {
 public:
  RunTrace() = default;
  explicit RunTrace(std::optional<std::size_t> depth_cap) : depth_cap_(depth_cap) {}

  void append(TraceRecord record);

  const std::vector<TraceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  std::optional<std::size_t> depth_cap() const { return depth_cap_; }

  /// Line-oriented `j leaf_path depth coord gain e` records, coord 1-based.
  /// `full_precision` switches from 6 decimals to round-trippable output.
  void write(std::ostream& out, bool full_precision = false) const;
  static RunTrace read(std::istream& in);

 private:
  std::optional<std::size_t> depth_cap_;
  std::vector<TraceRecord> records_;
};

}  // namespace treelab
