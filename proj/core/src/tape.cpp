#include "treelab/tape.hpp"

#include <openssl/sha.h>

#include <array>
#include <limits>
#include <stdexcept>
#include <vector>

namespace treelab {

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below requires a positive bound");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = next();
  while (draw >= limit) draw = next();
  return draw % bound;
}

double RandomStream::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Point RandomStream::point(std::size_t dimension) {
  check_dimension(dimension);
  return Point(dimension, next() & dimension_mask(dimension));
}

Point RandomStream::biased_point(std::span<const double> bias) {
  check_dimension(bias.size());
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < bias.size(); ++i) {
    if (uniform01() < bias[i]) mask |= std::uint64_t{1} << i;
  }
  return Point(bias.size(), mask);
}

RandomStream RandomnessTape::stream(std::string_view domain, std::string_view key) const {
  std::vector<unsigned char> message;
  message.reserve(8 + domain.size() + 1 + key.size());
  for (int byte = 0; byte < 8; ++byte) {
    message.push_back(static_cast<unsigned char>(master_seed_ >> (8 * byte)));
  }
  message.insert(message.end(), domain.begin(), domain.end());
  message.push_back(0);
  message.insert(message.end(), key.begin(), key.end());

  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(message.data(), message.size(), digest.data());

  std::array<std::uint32_t, 8> words{};
  for (std::size_t w = 0; w < words.size(); ++w) {
    words[w] = static_cast<std::uint32_t>(digest[4 * w]) |
               static_cast<std::uint32_t>(digest[4 * w + 1]) << 8 |
               static_cast<std::uint32_t>(digest[4 * w + 2]) << 16 |
               static_cast<std::uint32_t>(digest[4 * w + 3]) << 24;
  }
  std::seed_seq seeds(words.begin(), words.end());
  return RandomStream(seeds);
}

}  // namespace treelab
