#include "treelab/learners.hpp"

#include <numeric>
#include <stdexcept>

#include "treelab/minibatch.hpp"
#include "treelab/params.hpp"

namespace treelab {

bool CandidateOrder::operator()(const Candidate& a, const Candidate& b) const {
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.key != b.key) return a.key < b.key;
  return a.coord < b.coord;
}

GrowthEngine::GrowthEngine(const ImpurityFunction& g, std::size_t dimension, std::span<const Point> points,
                           LabelSource labels, const RandomnessTape& tape, Options options,
                           std::shared_ptr<LeafCache> cache)
    : g_(g),
      dimension_(dimension),
      points_(points),
      labels_(std::move(labels)),
      tape_(tape),
      options_(options),
      cache_(cache ? std::move(cache) : std::make_shared<LeafCache>()),
      tree_(dimension),
      trace_(options.depth_cap) {
  if (options_.target_size < 1) throw std::invalid_argument("target size t must be at least 1");
  if (options_.batch_size && *options_.batch_size == 0) throw std::invalid_argument("batch size b must be positive");
  for (const Point& x : points_) {
    if (x.dimension() != dimension_) throw std::invalid_argument("dataset point has the wrong dimension");
  }
  node_records_.assign(1, nullptr);
  members_.assign(1, {});
  materialize(tree_.root());
}

void GrowthEngine::set_batch_hook(std::function<void()> hook) { batch_hook_ = std::move(hook); }

void GrowthEngine::track(const Point& x, bool strand) {
  if (x.dimension() != dimension_) throw std::invalid_argument("tracked point has the wrong dimension");
  if (started_) throw std::logic_error("tracked points must be set before growth starts");
  const std::size_t k = tracked_.size();
  tracked_.push_back(x);
  is_strand_.push_back(strand);
  members_[tree_.root()].push_back(k);
  if (strand) {
    ++strand_count_;
    estimate_sum_ += 1;
  }
}

void GrowthEngine::set_strands(std::vector<Point> strands) {
  if (strand_count_ > 0) throw std::logic_error("strands already set");
  for (const Point& x : strands) track(x, true);
}

void GrowthEngine::add_focus(const Point& x) { track(x, false); }

bool GrowthEngine::relevant(NodeId leaf) const { return !options_.tracked_only || !members_[leaf].empty(); }

bool GrowthEngine::has_record(NodeId leaf) const { return leaf < node_records_.size() && node_records_[leaf]; }

LeafRecord& GrowthEngine::materialize(NodeId leaf) {
  if (node_records_[leaf]) return *node_records_[leaf];
  const LeafPath& path = tree_.node(leaf).path;
  std::string key = path.encode();
  auto it = cache_->find(key);
  if (it == cache_->end()) {
    LeafRecord rec;
    rec.path = path;
    rec.key = key;
    if (path.empty()) {
      rec.pool.resize(points_.size());
      std::iota(rec.pool.begin(), rec.pool.end(), std::size_t{0});
    } else {
      std::vector<PathStep> parent_steps(path.steps().begin(), path.steps().end() - 1);
      auto parent = cache_->find(LeafPath(parent_steps).encode());
      if (parent == cache_->end()) {
        rec.pool = consistent_indices(points_, path);
      } else {
        const PathStep last = path.steps().back();
        for (std::size_t idx : parent->second.pool) {
          if (points_[idx].sign(last.coord) == last.sign) rec.pool.push_back(idx);
        }
      }
    }
    if (options_.batch_size) {
      rec.batch = draw_batch_indices(rec.pool, *options_.batch_size, tape_, key);
    } else {
      rec.batch = rec.pool;
    }
    it = cache_->emplace(key, std::move(rec)).first;
  }
  node_records_[leaf] = &it->second;
  return it->second;
}

void GrowthEngine::ensure_labeled(LeafRecord& rec) {
  if (rec.labeled) return;
  rec.labels.reserve(rec.batch.size());
  for (std::size_t idx : rec.batch) {
    const Label y = labels_(idx);
    rec.labels.push_back(y);
    rec.ones += y;
  }
  rec.labeled = true;
  if (batch_hook_ && !rec.batch.empty()) batch_hook_();
}

void GrowthEngine::consider(NodeId leaf) {
  const TreeNode& node = tree_.node(leaf);
  if (options_.depth_cap && node.depth() > *options_.depth_cap) return;
  if (node.depth() >= dimension_) return;
  LeafRecord& rec = materialize(leaf);
  if (rec.batch.empty()) return;
  ensure_labeled(rec);
  if (rec.pure()) return;
  if (!rec.best) {
    std::vector<Point> pts;
    pts.reserve(rec.batch.size());
    for (std::size_t idx : rec.batch) pts.push_back(points_[idx]);
    rec.best = best_split(g_, pts, rec.labels, rec.path, dimension_);
  }
  if (!rec.best) return;
  frontier_.insert(Candidate{rec.best->gain, rec.key, rec.best->coord, leaf});
}

bool GrowthEngine::stopped() const {
  if (options_.stop_on_estimate) {
    return estimate_sum_ >= static_cast<std::uint64_t>(options_.target_size) * strand_count_;
  }
  return tree_.size() >= options_.target_size;
}

double GrowthEngine::size_estimate() const {
  if (strand_count_ == 0) return 1.0;
  return static_cast<double>(estimate_sum_) / static_cast<double>(strand_count_);
}

bool GrowthEngine::step() {
  if (options_.stop_on_estimate && strand_count_ == 0) {
    throw std::logic_error("size-estimate stopping needs strand points");
  }
  if (!started_) {
    started_ = true;
    consider(tree_.root());
  }
  if (stopped() || frontier_.empty()) return false;
  const Candidate best = *frontier_.begin();
  frontier_.erase(frontier_.begin());

  const std::size_t depth = tree_.node(best.node).depth();
  const auto [neg, pos] = tree_.split(best.node, best.coord);
  node_records_.resize(tree_.node_count(), nullptr);
  members_.resize(tree_.node_count());

  std::vector<std::size_t> moving = std::move(members_[best.node]);
  members_[best.node].clear();
  for (std::size_t k : moving) {
    members_[tracked_[k].positive(best.coord) ? pos : neg].push_back(k);
    if (is_strand_[k]) estimate_sum_ += std::uint64_t{1} << depth;
  }

  for (NodeId child : {neg, pos}) {
    if (!relevant(child)) continue;
    materialize(child);
    consider(child);
  }

  TraceRecord record;
  record.iteration = trace_.size() + 1;
  record.leaf = tree_.node(best.node).path;
  record.coord = best.coord;
  record.gain = best.gain;
  record.size_estimate = size_estimate();
  trace_.append(std::move(record));
  return true;
}

void GrowthEngine::run() {
  while (step()) {
  }
}

const LeafRecord& GrowthEngine::record(NodeId leaf) {
  if (!tree_.node(leaf).is_leaf()) throw std::invalid_argument("record requested for an internal node");
  LeafRecord& rec = materialize(leaf);
  ensure_labeled(rec);
  return rec;
}

Label GrowthEngine::completion_label(NodeId leaf) {
  const LeafRecord& rec = record(leaf);
  return round_mean(rec.ones, rec.batch.size());
}

DecisionTree GrowthEngine::completion() {
  std::vector<Label> labels(tree_.node_count(), 0);
  for (NodeId leaf : tree_.leaves()) labels[leaf] = completion_label(leaf);
  return DecisionTree(tree_, std::move(labels));
}

namespace {

GrowthEngine::LabelSource table_labels(const LabeledDataset& data) {
  return [&data](std::size_t idx) { return data.label(idx); };
}

}  // namespace

GrowthResult top_down_full(std::size_t t, const LabeledDataset& data, const ImpurityFunction& g) {
  if (t < 1) throw std::invalid_argument("t must be at least 1");
  GrowthEngine::Options opts;
  opts.target_size = t;
  GrowthEngine engine(g, data.dimension(), data.points(), table_labels(data), RandomnessTape(0), opts);
  engine.run();
  return GrowthResult{engine.completion(), engine.trace(), 1.0};
}

GrowthResult minibatch_top_down(std::size_t t, std::size_t b, const LabeledDataset& data, const ImpurityFunction& g,
                                const RandomnessTape& tape) {
  if (t < 1) throw std::invalid_argument("t must be at least 1");
  GrowthEngine::Options opts;
  opts.target_size = t;
  opts.batch_size = b;
  opts.depth_cap = learner_depth_cap(t);
  GrowthEngine engine(g, data.dimension(), data.points(), table_labels(data), tape, opts);
  engine.run();
  return GrowthResult{engine.completion(), engine.trace(), 1.0};
}

std::vector<Point> draw_strands(std::size_t b, std::size_t dimension, const RandomnessTape& tape) {
  auto stream = tape.stream(tape_domain::kStrands);
  std::vector<Point> strands;
  strands.reserve(b);
  for (std::size_t k = 0; k < b; ++k) strands.push_back(stream.point(dimension));
  return strands;
}

GrowthResult top_down_size_estimate(std::size_t t, std::size_t b, const LabeledDataset& data,
                                    const ImpurityFunction& g, const RandomnessTape& tape,
                                    std::optional<std::vector<Point>> strands) {
  if (t < 1) throw std::invalid_argument("t must be at least 1");
  GrowthEngine::Options opts;
  opts.target_size = t;
  opts.batch_size = b;
  opts.depth_cap = learner_depth_cap(t);
  opts.stop_on_estimate = true;
  GrowthEngine engine(g, data.dimension(), data.points(), table_labels(data), tape, opts);
  std::vector<Point> points = strands ? std::move(*strands) : draw_strands(b, data.dimension(), tape);
  if (points.empty()) throw std::invalid_argument("strand set must be non-empty");
  engine.set_strands(std::move(points));
  engine.run();
  return GrowthResult{engine.completion(), engine.trace(), engine.size_estimate()};
}

}  // namespace treelab
