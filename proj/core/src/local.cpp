#include "treelab/local.hpp"

#include <stdexcept>

#include "treelab/params.hpp"

namespace treelab {

double estimate_size(const PartialTree& tree, std::span<const Point> strands) {
  if (strands.empty()) throw std::invalid_argument("size estimate needs at least one strand point");
  std::uint64_t sum = 0;
  for (const Point& x : strands) sum += std::uint64_t{1} << tree.node(tree.leaf_of(x)).depth();
  return static_cast<double>(sum) / static_cast<double>(strands.size());
}

std::size_t local_label_bound(std::size_t t, std::size_t b) {
  const std::size_t depth = learner_depth_cap(t);
  return ((b + 1) * (depth + 1) + 1) * b;
}

LocalLearner::LocalLearner(std::size_t t, std::size_t b, const UnlabeledDataset& data, LabelOracle& oracle,
                           const ImpurityFunction& g, const RandomnessTape& tape,
                           std::optional<std::vector<Point>> strands)
    : t_(t),
      b_(b),
      data_(data),
      oracle_(oracle),
      g_(g),
      tape_(tape),
      depth_cap_(learner_depth_cap(t)),
      strands_(strands ? std::move(*strands) : draw_strands(b, data.dimension(), tape)),
      cache_(std::make_shared<LeafCache>()) {
  if (t < 1) throw std::invalid_argument("t must be at least 1");
  if (b < 1) throw std::invalid_argument("b must be at least 1");
  if (strands_.empty()) throw std::invalid_argument("strand set must be non-empty");
}

LocalPrediction LocalLearner::predict(const Point& x) {
  if (x.dimension() != data_.dimension()) throw std::invalid_argument("query point has the wrong dimension");
  const std::size_t before = oracle_.query_count();
  const char* phase = "score";

  GrowthEngine::Options opts;
  opts.target_size = t_;
  opts.batch_size = b_;
  opts.depth_cap = depth_cap_;
  opts.stop_on_estimate = true;
  opts.tracked_only = true;
  GrowthEngine engine(
      g_, data_.dimension(), data_.points(), [&](std::size_t idx) { return oracle_.label(idx, phase); }, tape_,
      opts, cache_);
  engine.set_batch_hook([&] { oracle_.note_batch(phase); });
  engine.set_strands(strands_);
  engine.add_focus(x);
  engine.run();

  phase = "predict";
  const NodeId leaf = engine.leaf_of(x);
  LocalPrediction out;
  out.label = engine.completion_label(leaf);
  out.leaf = engine.tree().node(leaf).path;
  out.size_estimate = engine.size_estimate();
  out.splits = engine.splits();
  out.new_labels = oracle_.query_count() - before;
  return out;
}

Label local_learner(std::size_t t, std::size_t b, const UnlabeledDataset& data, LabelOracle& oracle,
                    const Point& x, const ImpurityFunction& g, const RandomnessTape& tape) {
  LocalLearner learner(t, b, data, oracle, g, tape);
  return learner.predict(x).label;
}

}  // namespace treelab
