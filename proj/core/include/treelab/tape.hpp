#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "treelab/point.hpp"

namespace treelab {

/// Deterministic stream of 64-bit words. Only the raw engine output is used;
/// every derived quantity (bounded integers, doubles, points) is computed here
/// so results do not depend on the standard library's distributions.
class RandomStream {
 public:
  explicit RandomStream(std::seed_seq& seeds) : engine_(seeds) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform point of {-1,+1}^dimension.
  Point point(std::size_t dimension);

  /// Point whose coordinate i is +1 with probability bias[i].
  Point biased_point(std::span<const double> bias);

 private:
  std::mt19937_64 engine_;
};

/// Seed-keyed source of independent substreams. The substream for a
/// (domain, key) pair is seeded from SHA-256(master seed, domain, key), so the
/// same pair always yields the same stream regardless of call order.
class RandomnessTape {
 public:
  explicit RandomnessTape(std::uint64_t master_seed = 0) : master_seed_(master_seed) {}

  std::uint64_t master_seed() const { return master_seed_; }

  RandomStream stream(std::string_view domain, std::string_view key = {}) const;

 private:
  std::uint64_t master_seed_;
};

/// Tape domain tags shared by every learner.
namespace tape_domain {
inline constexpr std::string_view kBatch = "batch";
inline constexpr std::string_view kStrands = "strands";
inline constexpr std::string_view kDataset = "dataset";
}  // namespace tape_domain

}  // namespace treelab
