#include "treelab/point.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace treelab {

std::uint64_t dimension_mask(std::size_t dimension) {
  return dimension >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dimension) - 1;
}

void check_dimension(std::size_t dimension) {
  if (dimension == 0 || dimension > kMaxDimension) {
    throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDimension) +
                                "], got " + std::to_string(dimension));
  }
}

Point::Point(std::size_t dimension, std::uint64_t positive_mask)
    : dimension_(dimension), mask_(positive_mask) {
  check_dimension(dimension);
  if ((positive_mask & ~dimension_mask(dimension)) != 0) {
    throw std::invalid_argument("point mask has bits beyond its dimension");
  }
}

Point Point::from_signs(std::span<const int> signs) {
  check_dimension(signs.size());
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] == 1) {
      mask |= std::uint64_t{1} << i;
    } else if (signs[i] != -1) {
      throw std::invalid_argument("point entries must be -1 or +1");
    }
  }
  return Point(signs.size(), mask);
}

Point Point::parse(std::string_view text) {
  std::vector<int> signs;
  const bool compact = text.find_first_not_of("+- \t") == std::string_view::npos &&
                       text.find_first_of("0123456789") == std::string_view::npos;
  if (compact) {
    for (char c : text) {
      if (c == '+') signs.push_back(1);
      if (c == '-') signs.push_back(-1);
    }
  } else {
    std::size_t pos = 0;
    while (pos < text.size()) {
      while (pos < text.size() && (text[pos] == ',' || std::isspace(static_cast<unsigned char>(text[pos])))) ++pos;
      if (pos >= text.size()) break;
      if (text[pos] == '+') ++pos;
      int value = 0;
      auto [end, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
      if (ec != std::errc{}) {
        throw std::invalid_argument("cannot parse point '" + std::string(text) + "'");
      }
      signs.push_back(value);
      pos = static_cast<std::size_t>(end - text.data());
    }
  }
  return from_signs(signs);
}

Point Point::with_sign(std::size_t i, int sign) const {
  if (i >= dimension_) throw std::out_of_range("coordinate out of range");
  const std::uint64_t bit = std::uint64_t{1} << i;
  return Point(dimension_, sign > 0 ? (mask_ | bit) : (mask_ & ~bit));
}

std::string Point::to_string() const {
  std::string out(dimension_, '-');
  for (std::size_t i = 0; i < dimension_; ++i) {
    if (positive(i)) out[i] = '+';
  }
  return out;
}

LeafPath::LeafPath(std::vector<PathStep> steps) : steps_(std::move(steps)) {
  for (const auto& step : steps_) {
    if (step.coord >= kMaxDimension) throw std::invalid_argument("path coordinate out of range");
    if (step.sign != 1 && step.sign != -1) throw std::invalid_argument("path sign must be -1 or +1");
    const std::uint64_t bit = std::uint64_t{1} << step.coord;
    if (fixed_ & bit) throw std::invalid_argument("coordinate repeats along a path");
    fixed_ |= bit;
    if (step.sign > 0) value_ |= bit;
  }
}

LeafPath LeafPath::extended(std::size_t coord, int sign) const {
  auto steps = steps_;
  steps.push_back({coord, sign});
  return LeafPath(std::move(steps));
}

std::string LeafPath::encode() const {
  if (steps_.empty()) return "root";
  std::string out;
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(steps_[k].coord + 1);
    out += steps_[k].sign > 0 ? '+' : '-';
  }
  return out;
}

LeafPath LeafPath::decode(std::string_view text) {
  if (text == "root") return LeafPath{};
  std::vector<PathStep> steps;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t coord = 0;
    auto [end, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), coord);
    const auto at = static_cast<std::size_t>(end - text.data());
    if (ec != std::errc{} || coord == 0 || at >= text.size() || (text[at] != '+' && text[at] != '-')) {
      throw std::invalid_argument("malformed leaf path '" + std::string(text) + "'");
    }
    steps.push_back({coord - 1, text[at] == '+' ? 1 : -1});
    pos = at + 1;
    if (pos < text.size()) {
      if (text[pos] != ',') throw std::invalid_argument("malformed leaf path '" + std::string(text) + "'");
      ++pos;
    }
  }
  return LeafPath(std::move(steps));
}

}  // namespace treelab
