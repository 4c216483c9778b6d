#include "treelab/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace treelab {

namespace {

struct Header {
  std::size_t dimension = 0;
  std::size_t count = 0;
};

Header read_header(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  std::istringstream fields(line);
  Header h;
  if (!(fields >> h.dimension >> h.count)) throw std::invalid_argument("dataset header must be `d n`");
  check_dimension(h.dimension);
  return h;
}

std::vector<int> read_row(std::istream& in, std::size_t row) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    line.clear();
  }
  if (line.empty()) throw std::invalid_argument("dataset ended before row " + std::to_string(row + 1));
  std::istringstream fields(line);
  std::vector<int> values;
  int v = 0;
  while (fields >> v) values.push_back(v);
  if (!fields.eof()) throw std::invalid_argument("non-numeric entry in dataset row " + std::to_string(row + 1));
  return values;
}

Point row_point(const std::vector<int>& values, std::size_t dimension) {
  return Point::from_signs(std::span<const int>(values.data(), dimension));
}

template <typename Dataset>
void write_rows(std::ostream& out, const Dataset& data, bool labeled) {
  out << data.dimension() << ' ' << data.size() << '\n';
  for (std::size_t r = 0; r < data.size(); ++r) {
    const Point& x = data.point(r);
    for (std::size_t i = 0; i < x.dimension(); ++i) {
      if (i > 0) out << ' ';
      out << x.sign(i);
    }
    if constexpr (requires { data.label(r); }) {
      if (labeled) out << ' ' << static_cast<int>(data.label(r));
    }
    out << '\n';
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Tree grammar.

struct SExpr {
  bool leaf = true;
  Label label = 0;
  std::size_t coord = 0;
  std::unique_ptr<SExpr> negative;
  std::unique_ptr<SExpr> positive;
};

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  std::unique_ptr<SExpr> parse() {
    auto root = parse_node();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return root;
  }

  std::size_t max_coord() const { return max_coord_; }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("tree parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) fail("expected a token");
    return text_.substr(start, pos_ - start);
  }

  std::size_t number() {
    const auto token = word();
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size()) fail("expected a number");
    return value;
  }

  std::unique_ptr<SExpr> parse_node() {
    expect('(');
    auto node = std::make_unique<SExpr>();
    const auto kind = word();
    if (kind == "leaf") {
      const std::size_t label = number();
      if (label > 1) fail("leaf label must be 0 or 1");
      node->label = static_cast<Label>(label);
    } else if (kind == "split") {
      node->leaf = false;
      const std::size_t coord = number();
      if (coord == 0) fail("split coordinates are 1-based");
      node->coord = coord - 1;
      max_coord_ = std::max(max_coord_, coord);
      node->negative = parse_node();
      node->positive = parse_node();
    } else {
      fail("unknown node kind '" + std::string(kind) + "'");
    }
    expect(')');
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t max_coord_ = 0;
};

void build(const SExpr& expr, NodeId id, PartialTree& shape, std::vector<Label>& labels) {
  if (expr.leaf) {
    labels.resize(std::max(labels.size(), id + 1));
    labels[id] = expr.label;
    return;
  }
  const auto [neg, pos] = shape.split(id, expr.coord);
  labels.resize(std::max(labels.size(), pos + 1));
  build(*expr.negative, neg, shape, labels);
  build(*expr.positive, pos, shape, labels);
}

void format_node(const DecisionTree& tree, NodeId id, std::string& out) {
  const auto& node = tree.shape().node(id);
  if (node.is_leaf()) {
    out += "(leaf ";
    out += static_cast<char>('0' + tree.leaf_label(id));
    out += ')';
    return;
  }
  out += "(split ";
  out += std::to_string(*node.coord + 1);
  out += ' ';
  format_node(tree, node.negative, out);
  out += ' ';
  format_node(tree, node.positive, out);
  out += ')';
}

}  // namespace

LabeledDataset read_labeled_dataset(std::istream& in) {
  const Header h = read_header(in);
  LabeledDataset data(h.dimension);
  for (std::size_t r = 0; r < h.count; ++r) {
    const auto values = read_row(in, r);
    if (values.size() != h.dimension + 1) {
      throw std::invalid_argument("labeled row " + std::to_string(r + 1) + " needs " +
                                  std::to_string(h.dimension + 1) + " entries");
    }
    const int y = values.back();
    if (y != 0 && y != 1) throw std::invalid_argument("label in row " + std::to_string(r + 1) + " must be 0 or 1");
    data.add(row_point(values, h.dimension), static_cast<Label>(y));
  }
  return data;
}

UnlabeledDataset read_unlabeled_dataset(std::istream& in) {
  const Header h = read_header(in);
  UnlabeledDataset data(h.dimension);
  for (std::size_t r = 0; r < h.count; ++r) {
    const auto values = read_row(in, r);
    if (values.size() != h.dimension && values.size() != h.dimension + 1) {
      throw std::invalid_argument("row " + std::to_string(r + 1) + " needs " + std::to_string(h.dimension) +
                                  " entries");
    }
    data.add(row_point(values, h.dimension));
  }
  return data;
}

void write_dataset(std::ostream& out, const LabeledDataset& data) { write_rows(out, data, true); }
void write_dataset(std::ostream& out, const UnlabeledDataset& data) { write_rows(out, data, false); }

LabeledDataset load_labeled_dataset(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_labeled_dataset(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

UnlabeledDataset load_unlabeled_dataset(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_unlabeled_dataset(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void save_dataset(const std::filesystem::path& path, const LabeledDataset& data) {
  auto out = open_output(path);
  write_dataset(out, data);
}

std::string format_tree(const DecisionTree& tree) {
  std::string out;
  format_node(tree, tree.shape().root(), out);
  return out;
}

DecisionTree parse_tree(std::string_view text, std::optional<std::size_t> dimension) {
  TreeParser parser(text);
  const auto root = parser.parse();
  const std::size_t d = dimension.value_or(std::max<std::size_t>(parser.max_coord(), 1));
  if (parser.max_coord() > d) {
    throw std::invalid_argument("tree queries coordinate " + std::to_string(parser.max_coord()) +
                                " beyond dimension " + std::to_string(d));
  }
  PartialTree shape(d);
  std::vector<Label> labels(1, 0);
  build(*root, shape.root(), shape, labels);
  labels.resize(shape.node_count());
  return DecisionTree(std::move(shape), std::move(labels));
}

DecisionTree load_tree(const std::filesystem::path& path, std::optional<std::size_t> dimension) {
  auto in = open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_tree(buffer.str(), dimension);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void save_tree(const std::filesystem::path& path, const DecisionTree& tree) {
  auto out = open_output(path);
  out << format_tree(tree) << '\n';
}

}  // namespace treelab
