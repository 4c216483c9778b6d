#include "treelab/impurity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace treelab {

ImpurityFunction::ImpurityFunction(std::string name, std::function<double(double)> g, double holder_constant,
                                   double holder_exponent, double strong_concavity)
    : name_(std::move(name)),
      g_(std::move(g)),
      holder_constant_(holder_constant),
      holder_exponent_(holder_exponent),
      strong_concavity_(strong_concavity) {
  if (!g_) throw std::invalid_argument("impurity function needs a callable");
  if (!(holder_exponent_ > 0.0 && holder_exponent_ <= 1.0)) {
    throw std::invalid_argument("Hoelder exponent must lie in (0, 1]");
  }
}

ImpurityFunction ImpurityFunction::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  return ImpurityFunction(
      name_ + "*" + std::to_string(factor), [g = g_, factor](double p) { return factor * g(p); },
      holder_constant_ * factor, holder_exponent_, strong_concavity_ * factor);
}

// kappa below is the largest constant with G((a+b)/2) - (G(a)+G(b))/2 >= (kappa/2)(b-a)^2,
// i.e. a quarter of min |G''|.

ImpurityFunction gini() {
  return ImpurityFunction("gini", [](double p) { return 4.0 * p * (1.0 - p); }, 4.0, 1.0, 2.0);
}

ImpurityFunction entropy() {
  auto h = [](double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
  };
  return ImpurityFunction("entropy", h, 2.0, 0.5, 1.0 / std::numbers::ln2);
}

ImpurityFunction kearns_mansour() {
  auto km = [](double p) {
    const double v = p * (1.0 - p);
    return v <= 0.0 ? 0.0 : 2.0 * std::sqrt(v);
  };
  return ImpurityFunction("kearns-mansour", km, 2.0, 0.5, 1.0);
}

std::vector<ImpurityFunction> builtin_impurities() { return {gini(), entropy(), kearns_mansour()}; }

ImpurityFunction impurity_by_name(std::string_view name) {
  if (name == "gini") return gini();
  if (name == "entropy") return entropy();
  if (name == "kearns-mansour") return kearns_mansour();
  throw std::invalid_argument("unknown impurity '" + std::string(name) +
                              "' (expected gini, entropy or kearns-mansour)");
}

double local_gain(const ImpurityFunction& g, const SplitCounts& c) {
  if (c.total() == 0) throw std::invalid_argument("local gain of an empty batch is undefined");
  if (c.negative_total == 0 || c.positive_total == 0) return 0.0;
  const double mean = static_cast<double>(c.ones()) / static_cast<double>(c.total());
  const double neg = static_cast<double>(c.negative_ones) / static_cast<double>(c.negative_total);
  const double pos = static_cast<double>(c.positive_ones) / static_cast<double>(c.positive_total);
  return g(mean) - (0.5 * g(neg) + 0.5 * g(pos));
}

SplitCounts split_counts(std::span<const Point> points, std::span<const Label> labels, std::size_t coord) {
  if (points.size() != labels.size()) throw std::invalid_argument("points and labels differ in length");
  SplitCounts c;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].positive(coord)) {
      ++c.positive_total;
      c.positive_ones += labels[k];
    } else {
      ++c.negative_total;
      c.negative_ones += labels[k];
    }
  }
  return c;
}

double local_gain(const ImpurityFunction& g, const Minibatch& batch, std::size_t coord) {
  if (batch.empty()) throw std::invalid_argument("local gain of an empty batch is undefined");
  if (!batch.labeled()) throw std::invalid_argument("local gain needs a labeled batch");
  return local_gain(g, split_counts(batch.points, batch.labels, coord));
}

double purity_gain(const ImpurityFunction& g, const Minibatch& batch, std::size_t leaf_depth, std::size_t coord) {
  return std::ldexp(local_gain(g, batch, coord), -static_cast<int>(leaf_depth));
}

std::optional<LeafScore> best_split(const ImpurityFunction& g, std::span<const Point> points,
                                    std::span<const Label> labels, const LeafPath& leaf, std::size_t dimension) {
  if (points.empty()) return std::nullopt;
  if (points.size() != labels.size()) throw std::invalid_argument("points and labels differ in length");
  std::vector<std::size_t> positive_total(dimension, 0);
  std::vector<std::size_t> positive_ones(dimension, 0);
  std::size_t ones = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const std::uint64_t m = points[k].mask();
    ones += labels[k];
    for (std::size_t c = 0; c < dimension; ++c) {
      if ((m >> c) & 1U) {
        ++positive_total[c];
        positive_ones[c] += labels[k];
      }
    }
  }
  std::optional<LeafScore> best;
  for (std::size_t c = 0; c < dimension; ++c) {
    if (leaf.uses(c)) continue;
    SplitCounts counts;
    counts.positive_total = positive_total[c];
    counts.positive_ones = positive_ones[c];
    counts.negative_total = points.size() - positive_total[c];
    counts.negative_ones = ones - positive_ones[c];
    const double gain = std::ldexp(local_gain(g, counts), -static_cast<int>(leaf.depth()));
    if (!best || gain > best->gain) best = LeafScore{c, gain};
  }
  return best;
}

namespace {

// Visits the sign mask of every point reaching `leaf`.
template <typename Visit>
void for_each_reaching(const LeafPath& leaf, std::size_t dimension, Visit&& visit) {
  if (dimension > kMaxExhaustiveDimension) {
    throw std::invalid_argument("exhaustive enumeration needs d <= " + std::to_string(kMaxExhaustiveDimension));
  }
  const std::uint64_t free = dimension_mask(dimension) & ~leaf.fixed_mask();
  std::uint64_t sub = 0;
  while (true) {
    visit(sub | leaf.value_mask());
    if (sub == free) break;
    sub = (sub - free) & free;
  }
}

}  // namespace

double true_local_gain(const ImpurityFunction& g, const TargetFunction& f, const LeafPath& leaf, std::size_t coord) {
  const std::size_t d = f.dimension();
  if (coord >= d) throw std::invalid_argument("coordinate exceeds dimension");
  if (leaf.uses(coord)) throw std::invalid_argument("coordinate is already queried on the leaf's path");
  SplitCounts c;
  for_each_reaching(leaf, d, [&](std::uint64_t m) {
    const Label y = f(Point(d, m));
    if ((m >> coord) & 1U) {
      ++c.positive_total;
      c.positive_ones += y;
    } else {
      ++c.negative_total;
      c.negative_ones += y;
    }
  });
  return local_gain(g, c);
}

double true_purity_gain(const ImpurityFunction& g, const TargetFunction& f, const LeafPath& leaf, std::size_t coord) {
  return std::ldexp(true_local_gain(g, f, leaf, coord), -static_cast<int>(leaf.depth()));
}

double g_impurity(const ImpurityFunction& g, const TargetFunction& f, const PartialTree& tree) {
  if (tree.dimension() != f.dimension()) throw std::invalid_argument("tree and target dimensions differ");
  const std::size_t d = f.dimension();
  double total = 0.0;
  for (NodeId leaf : tree.leaves()) {
    const auto& path = tree.node(leaf).path;
    std::size_t reach = 0;
    std::size_t ones = 0;
    for_each_reaching(path, d, [&](std::uint64_t m) {
      ++reach;
      ones += f(Point(d, m));
    });
    total += std::ldexp(g(static_cast<double>(ones) / static_cast<double>(reach)), -static_cast<int>(path.depth()));
  }
  return total;
}

}  // namespace treelab
