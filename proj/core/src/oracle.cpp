#include "treelab/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "treelab/tape.hpp"

namespace treelab::oracle {

namespace {

void require_small(std::size_t d) {
  if (d > kMaxExhaustiveDimension) throw std::invalid_argument("exhaustive oracle needs a small dimension");
}

bool meets(const LeafPath& path, const Point& x) {
  for (const PathStep& step : path.steps()) {
    if (x.sign(step.coord) != step.sign) return false;
  }
  return true;
}

double mean(double ones, double total) { return ones / total; }

Point sample_reaching(RandomStream& stream, const LeafPath& leaf, std::size_t d) {
  Point x = stream.point(d);
  for (const PathStep& step : leaf.steps()) x = x.with_sign(step.coord, step.sign);
  return x;
}

std::vector<Point> draw_batch(RandomStream& stream, const LeafPath& leaf, std::size_t d, std::size_t b) {
  std::vector<Point> batch;
  batch.reserve(b);
  for (std::size_t k = 0; k < b; ++k) batch.push_back(sample_reaching(stream, leaf, d));
  return batch;
}

}  // namespace

Label scan_evaluate(const DecisionTree& tree, const Point& x) {
  const PartialTree& shape = tree.shape();
  if (x.dimension() != shape.dimension()) throw std::invalid_argument("point has the wrong dimension");
  for (NodeId id = 0; id < shape.node_count(); ++id) {
    const TreeNode& node = shape.node(id);
    if (node.is_leaf() && meets(node.path, x)) return tree.leaf_label(id);
  }
  throw std::logic_error("no leaf matches the point");
}

double definition_local_gain(const ImpurityFunction& g, std::span<const Point> points, std::span<const Label> labels,
                             std::size_t coord) {
  double all = 0, all_ones = 0, neg = 0, neg_ones = 0, pos = 0, pos_ones = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    all += 1;
    all_ones += labels[k];
    if (points[k].sign(coord) < 0) {
      neg += 1;
      neg_ones += labels[k];
    } else {
      pos += 1;
      pos_ones += labels[k];
    }
  }
  if (all == 0) throw std::invalid_argument("empty sample");
  if (neg == 0 || pos == 0) return 0.0;
  return g(mean(all_ones, all)) - 0.5 * g(mean(neg_ones, neg)) - 0.5 * g(mean(pos_ones, pos));
}

double exhaustive_local_gain(const ImpurityFunction& g, const TargetFunction& f, const LeafPath& leaf,
                             std::size_t coord) {
  const std::size_t d = f.dimension();
  require_small(d);
  if (leaf.uses(coord)) throw std::invalid_argument("coordinate already on the path");
  std::vector<Point> points;
  std::vector<Label> labels;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) {
    const Point x(d, m);
    if (!meets(leaf, x)) continue;
    points.push_back(x);
    labels.push_back(f(x));
  }
  return definition_local_gain(g, points, labels, coord);
}

double exhaustive_impurity(const ImpurityFunction& g, const TargetFunction& f, const PartialTree& tree) {
  const std::size_t d = f.dimension();
  require_small(d);
  std::vector<double> reach(tree.node_count(), 0.0);
  std::vector<double> ones(tree.node_count(), 0.0);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) {
    const Point x(d, m);
    NodeId id = tree.root();
    while (!tree.node(id).is_leaf()) {
      const TreeNode& node = tree.node(id);
      id = x.positive(*node.coord) ? node.positive : node.negative;
    }
    reach[id] += 1;
    ones[id] += f(x);
  }
  const double cube = std::ldexp(1.0, static_cast<int>(d));
  double total = 0.0;
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    if (!tree.node(id).is_leaf()) continue;
    // Leaf weight reach/2^d equals 2^-depth for the uniform cube.
    total += reach[id] / cube * g(mean(ones[id], reach[id]));
  }
  return total;
}

bool check_telescoping(const ImpurityFunction& g, const TargetFunction& f, const PartialTree& tree, NodeId leaf,
                       std::size_t coord, double tolerance) {
  const double before = exhaustive_impurity(g, f, tree);
  PartialTree after = tree;
  after.split(leaf, coord);
  const double after_value = exhaustive_impurity(g, f, after);
  const LeafPath& path = tree.node(leaf).path;
  const double gain = std::ldexp(exhaustive_local_gain(g, f, path, coord), -static_cast<int>(path.depth()));
  return std::abs(after_value - (before - gain)) <= tolerance;
}

std::vector<ShallowPrefix> shallow_split_counts(const RunTrace& trace) {
  std::vector<ShallowPrefix> out;
  std::size_t shallow = 0;
  const auto& records = trace.records();
  std::size_t next_power = 1;
  for (std::size_t j = 1; j <= records.size(); ++j) {
    const std::size_t depth = records[j - 1].depth();
    // depth < log2 j - 2  <=>  2^(depth + 2) < j
    if (depth + 2 < 64 && (std::uint64_t{1} << (depth + 2)) < j) ++shallow;
    if (j == next_power) {
      out.push_back({j, shallow});
      next_power *= 2;
    }
  }
  return out;
}

bool check_shallow_splits(const RunTrace& trace) {
  for (const ShallowPrefix& p : shallow_split_counts(trace)) {
    if (4 * p.shallow > p.k) return false;
  }
  return true;
}

std::uint64_t exact_size_sum(const PartialTree& tree) {
  const std::size_t d = tree.dimension();
  require_small(d);
  std::uint64_t sum = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) {
    const Point x(d, m);
    std::size_t depth = 0;
    NodeId id = tree.root();
    while (!tree.node(id).is_leaf()) {
      const TreeNode& node = tree.node(id);
      id = x.positive(*node.coord) ? node.positive : node.negative;
      ++depth;
    }
    sum += std::uint64_t{1} << depth;
  }
  return sum;
}

double exact_size_expectation(const PartialTree& tree) {
  return std::ldexp(static_cast<double>(exact_size_sum(tree)), -static_cast<int>(tree.dimension()));
}

ConcentrationResult batch_balance_trials(const ConcentrationConfig& config) {
  const std::size_t d = config.target.dimension();
  const std::size_t need = config.min_batch ? config.min_batch : config.batch_size;
  RandomStream stream = RandomnessTape(config.seed).stream("concentration", "balance");
  ConcentrationResult result;
  result.trials = config.trials;
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    const auto batch = draw_batch(stream, config.leaf, d, config.batch_size);
    bool failed = false;
    for (std::size_t i = 0; i < d && !failed; ++i) {
      if (config.leaf.uses(i)) continue;
      std::size_t positive = 0;
      for (const Point& x : batch) positive += x.positive(i) ? 1 : 0;
      const std::size_t negative = batch.size() - positive;
      failed = 4 * positive < need || 4 * negative < need;
    }
    if (failed) ++result.failures;
  }
  return result;
}

ConcentrationResult gain_accuracy_trials(const ImpurityFunction& g, const ConcentrationConfig& config) {
  const std::size_t d = config.target.dimension();
  std::vector<double> truth(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    if (!config.leaf.uses(i)) truth[i] = exhaustive_local_gain(g, config.target, config.leaf, i);
  }
  RandomStream stream = RandomnessTape(config.seed).stream("concentration", "gain");
  ConcentrationResult result;
  result.trials = config.trials;
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    const auto batch = draw_batch(stream, config.leaf, d, config.batch_size);
    std::vector<Label> labels;
    labels.reserve(batch.size());
    for (const Point& x : batch) labels.push_back(config.target(x));
    bool failed = false;
    for (std::size_t i = 0; i < d && !failed; ++i) {
      if (config.leaf.uses(i)) continue;
      failed = std::abs(definition_local_gain(g, batch, labels, i) - truth[i]) > config.accuracy;
    }
    if (failed) ++result.failures;
  }
  return result;
}

}  // namespace treelab::oracle
