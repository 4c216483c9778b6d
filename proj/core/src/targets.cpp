#include "treelab/targets.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <functional>
#include <stdexcept>

#include "treelab/io.hpp"

namespace treelab {

namespace {

std::uint64_t coord_bit(std::size_t dimension, std::size_t coord) {
  if (coord >= dimension) {
    throw std::invalid_argument("coordinate " + std::to_string(coord + 1) + " exceeds dimension " +
                                std::to_string(dimension));
  }
  return std::uint64_t{1} << coord;
}

std::size_t parse_index(std::string_view token, std::string_view spec) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size() || value == 0) {
    throw std::invalid_argument("bad coordinate '" + std::string(token) + "' in target '" + std::string(spec) + "'");
  }
  return value - 1;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto at = text.find(sep, start);
    parts.push_back(text.substr(start, at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

void check_exhaustive(std::size_t dimension) {
  if (dimension > kMaxExhaustiveDimension) {
    throw std::invalid_argument("exhaustive enumeration needs d <= " + std::to_string(kMaxExhaustiveDimension));
  }
}

}  // namespace

TargetFunction TargetFunction::dictator(std::size_t dimension, std::size_t coord) {
  check_dimension(dimension);
  coord_bit(dimension, coord);
  TargetFunction f(Kind::kDictator, dimension);
  f.coord_ = coord;
  return f;
}

TargetFunction TargetFunction::majority(std::size_t dimension) {
  check_dimension(dimension);
  return TargetFunction(Kind::kMajority, dimension);
}

TargetFunction TargetFunction::tribes(std::size_t dimension, std::size_t width) {
  check_dimension(dimension);
  if (width == 0 || width > dimension) throw std::invalid_argument("tribes width must be in [1, d]");
  TargetFunction f(Kind::kTribes, dimension);
  for (std::size_t start = 0; start + width <= dimension; start += width) {
    f.terms_.push_back(dimension_mask(width) << start);
  }
  f.coord_ = width;
  return f;
}

TargetFunction TargetFunction::dnf(std::size_t dimension, std::vector<std::vector<std::size_t>> terms) {
  check_dimension(dimension);
  if (terms.empty()) throw std::invalid_argument("DNF needs at least one term");
  TargetFunction f(Kind::kDnf, dimension);
  std::uint64_t used = 0;
  for (const auto& term : terms) {
    if (term.empty()) throw std::invalid_argument("DNF terms must be non-empty");
    std::uint64_t mask = 0;
    for (std::size_t c : term) {
      const auto bit = coord_bit(dimension, c);
      if ((used | mask) & bit) throw std::invalid_argument("DNF must be read-once");
      mask |= bit;
    }
    used |= mask;
    f.terms_.push_back(mask);
  }
  return f;
}

TargetFunction TargetFunction::tree(DecisionTree tree) {
  TargetFunction f(Kind::kTree, tree.dimension());
  f.tree_ = std::make_shared<const DecisionTree>(std::move(tree));
  return f;
}

TargetFunction TargetFunction::parity(std::size_t dimension, std::vector<std::size_t> coords) {
  check_dimension(dimension);
  TargetFunction f(Kind::kParity, dimension);
  for (std::size_t c : coords) f.parity_mask_ |= coord_bit(dimension, c);
  return f;
}

TargetFunction TargetFunction::truth_table(std::size_t dimension, std::vector<Label> table) {
  check_dimension(dimension);
  check_exhaustive(dimension);
  if (table.size() != (std::size_t{1} << dimension)) throw std::invalid_argument("truth table needs 2^d entries");
  for (Label y : table) {
    if (y > 1) throw std::invalid_argument("truth table entries must be 0 or 1");
  }
  TargetFunction f(Kind::kTruthTable, dimension);
  f.table_ = std::make_shared<const std::vector<Label>>(std::move(table));
  return f;
}

TargetFunction TargetFunction::parse(std::string_view spec, std::size_t dimension) {
  const auto colon = spec.find(':');
  const auto name = spec.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  auto need_arg = [&] {
    if (arg.empty()) throw std::invalid_argument("target '" + std::string(name) + "' needs an argument");
  };
  if (name == "dictator") {
    need_arg();
    return dictator(dimension, parse_index(arg, spec));
  }
  if (name == "majority") return majority(dimension);
  if (name == "tribes") {
    need_arg();
    return tribes(dimension, parse_index(arg, spec) + 1);
  }
  if (name == "dnf") {
    need_arg();
    std::vector<std::vector<std::size_t>> terms;
    for (auto term : split(arg, '|')) {
      std::vector<std::size_t> literals;
      for (auto lit : split(term, '&')) literals.push_back(parse_index(lit, spec));
      terms.push_back(std::move(literals));
    }
    return dnf(dimension, std::move(terms));
  }
  if (name == "xor") {
    need_arg();
    std::vector<std::size_t> coords;
    for (auto c : split(arg, ',')) coords.push_back(parse_index(c, spec));
    return parity(dimension, std::move(coords));
  }
  if (name == "tree") {
    need_arg();
    return tree(load_tree(std::string(arg), dimension));
  }
  if (name == "table") {
    need_arg();
    std::vector<Label> table;
    for (char c : arg) {
      if (c != '0' && c != '1') throw std::invalid_argument("truth table must be a 0/1 string");
      table.push_back(static_cast<Label>(c - '0'));
    }
    return truth_table(dimension, std::move(table));
  }
  throw std::invalid_argument("unknown target '" + std::string(spec) + "'");
}

Label TargetFunction::evaluate(const Point& x) const {
  if (x.dimension() != dimension_) {
    throw std::invalid_argument("point dimension " + std::to_string(x.dimension()) +
                                " does not match target dimension " + std::to_string(dimension_));
  }
  const std::uint64_t m = x.mask();
  bool value = false;
  switch (kind_) {
    case Kind::kDictator:
      value = x.positive(coord_);
      break;
    case Kind::kMajority:
      value = 2 * static_cast<std::size_t>(std::popcount(m)) >= dimension_;
      break;
    case Kind::kTribes:
    case Kind::kDnf:
      value = std::any_of(terms_.begin(), terms_.end(), [m](std::uint64_t t) { return (m & t) == t; });
      break;
    case Kind::kTree:
      value = tree_->evaluate(x) == 1;
      break;
    case Kind::kParity:
      value = (std::popcount(m & parity_mask_) & 1) == 1;
      break;
    case Kind::kTruthTable:
      value = (*table_)[m] == 1;
      break;
  }
  return static_cast<Label>(value != negated_);
}

TargetFunction TargetFunction::complement() const {
  TargetFunction f = *this;
  f.negated_ = !negated_;
  return f;
}

std::string TargetFunction::describe() const {
  std::string base;
  switch (kind_) {
    case Kind::kDictator: base = "dictator:" + std::to_string(coord_ + 1); break;
    case Kind::kMajority: base = "majority"; break;
    case Kind::kTribes: base = "tribes:" + std::to_string(coord_); break;
    case Kind::kDnf: base = "dnf"; break;
    case Kind::kTree: base = "tree"; break;
    case Kind::kParity: base = "xor"; break;
    case Kind::kTruthTable: base = "table"; break;
  }
  return negated_ ? "not " + base : base;
}

bool is_monotone(const TargetFunction& f) {
  const std::size_t d = f.dimension();
  check_exhaustive(d);
  const std::uint64_t cube = std::uint64_t{1} << d;
  std::vector<Label> values(cube);
  for (std::uint64_t m = 0; m < cube; ++m) values[m] = f(Point(d, m));
  for (std::size_t i = 0; i < d; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    bool increases = false;
    bool decreases = false;
    for (std::uint64_t m = 0; m < cube; ++m) {
      if (m & bit) continue;
      const Label low = values[m];
      const Label high = values[m | bit];
      increases |= high > low;
      decreases |= high < low;
    }
    if (increases && decreases) return false;
  }
  return true;
}

LabeledDataset sample_dataset(const TargetFunction& f, std::size_t n, std::size_t dimension,
                              const RandomnessTape& tape, std::string_view key) {
  if (dimension != f.dimension()) throw std::invalid_argument("dataset dimension must match the target");
  auto stream = tape.stream(tape_domain::kDataset, key);
  std::vector<Point> points;
  std::vector<Label> labels;
  points.reserve(n);
  labels.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    points.push_back(stream.point(dimension));
    labels.push_back(f(points.back()));
  }
  return LabeledDataset(dimension, std::move(points), std::move(labels));
}

double exact_error(const TargetFunction& f, const DecisionTree& tree) {
  const std::size_t d = f.dimension();
  if (tree.dimension() != d) throw std::invalid_argument("tree and target dimensions differ");
  check_exhaustive(d);
  const std::uint64_t cube = std::uint64_t{1} << d;
  std::uint64_t mistakes = 0;
  for (std::uint64_t m = 0; m < cube; ++m) {
    const Point x(d, m);
    mistakes += f(x) != tree.evaluate(x);
  }
  return static_cast<double>(mistakes) / static_cast<double>(cube);
}

double sampled_error(const TargetFunction& f, const DecisionTree& tree, std::size_t samples,
                     RandomStream& stream) {
  if (tree.dimension() != f.dimension()) throw std::invalid_argument("tree and target dimensions differ");
  if (samples == 0) throw std::invalid_argument("sampled_error needs at least one sample");
  std::size_t mistakes = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const Point x = stream.point(f.dimension());
    mistakes += f(x) != tree.evaluate(x);
  }
  return static_cast<double>(mistakes) / static_cast<double>(samples);
}

double test_error(const DecisionTree& tree, const TestSet& test) {
  if (test.empty()) throw std::invalid_argument("test set is empty");
  std::size_t mistakes = 0;
  for (std::size_t k = 0; k < test.size(); ++k) mistakes += tree.evaluate(test.point(k)) != test.label(k);
  return static_cast<double>(mistakes) / static_cast<double>(test.size());
}

DecisionTree random_tree(std::size_t dimension, std::size_t max_depth, double split_probability,
                         RandomStream& stream) {
  PartialTree shape(dimension);
  std::vector<NodeId> open{shape.root()};
  while (!open.empty()) {
    const NodeId id = open.back();
    open.pop_back();
    const auto& path = shape.node(id).path;
    if (path.depth() >= std::min(max_depth, dimension)) continue;
    if (id != shape.root() && stream.uniform01() >= split_probability) continue;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < dimension; ++c) {
      if (!path.uses(c)) free.push_back(c);
    }
    const std::size_t coord = free[stream.uniform_below(free.size())];
    const auto [neg, pos] = shape.split(id, coord);
    open.push_back(pos);
    open.push_back(neg);
  }
  std::vector<Label> labels(shape.node_count(), 0);
  for (NodeId leaf : shape.leaves()) labels[leaf] = static_cast<Label>(stream.next() & 1U);
  return DecisionTree(std::move(shape), std::move(labels));
}

DecisionTree random_monotone_tree(std::size_t dimension, std::size_t support, RandomStream& stream) {
  check_dimension(dimension);
  if (support == 0 || support > std::min<std::size_t>(dimension, 16)) {
    throw std::invalid_argument("support must be in [1, min(d, 16)]");
  }
  std::vector<std::size_t> coords(dimension);
  for (std::size_t c = 0; c < dimension; ++c) coords[c] = c;
  for (std::size_t k = 0; k < support; ++k) {
    std::swap(coords[k], coords[k + stream.uniform_below(dimension - k)]);
  }
  coords.resize(support);
  std::vector<unsigned> weights(support);
  unsigned total = 0;
  for (auto& w : weights) {
    w = 1 + static_cast<unsigned>(stream.uniform_below(3));
    total += w;
  }
  const unsigned threshold = 1 + static_cast<unsigned>(stream.uniform_below(total));

  // g is evaluated on the support coordinates fixed along a path plus a free
  // assignment of the rest; a leaf is emitted once g is constant.
  auto weight_of = [&](std::uint64_t mask) {
    unsigned sum = 0;
    for (std::size_t k = 0; k < support; ++k) {
      if ((mask >> coords[k]) & 1U) sum += weights[k];
    }
    return sum;
  };

  PartialTree shape(dimension);
  std::vector<Label> labels(1, 0);
  std::vector<NodeId> open{shape.root()};
  while (!open.empty()) {
    const NodeId id = open.back();
    open.pop_back();
    const LeafPath path = shape.node(id).path;
    std::vector<std::size_t> free;
    for (std::size_t c : coords) {
      if (!path.uses(c)) free.push_back(c);
    }
    const unsigned fixed_weight = weight_of(path.value_mask());
    unsigned free_weight = 0;
    for (std::size_t k = 0; k < support; ++k) {
      if (!path.uses(coords[k])) free_weight += weights[k];
    }
    const bool always = fixed_weight >= threshold;
    const bool never = fixed_weight + free_weight < threshold;
    if (always || never) {
      labels.resize(shape.node_count());
      labels[id] = always ? 1 : 0;
      continue;
    }
    const std::size_t coord = free[stream.uniform_below(free.size())];
    const auto [neg, pos] = shape.split(id, coord);
    labels.resize(shape.node_count());
    open.push_back(pos);
    open.push_back(neg);
  }
  labels.resize(shape.node_count());
  return DecisionTree(std::move(shape), std::move(labels));
}

}  // namespace treelab
