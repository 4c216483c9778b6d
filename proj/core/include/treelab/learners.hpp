#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "treelab/dataset.hpp"
#include "treelab/impurity.hpp"
#include "treelab/tape.hpp"
#include "treelab/trace.hpp"
#include "treelab/tree.hpp"

namespace treelab {

/// Everything the growth loop knows about one leaf. Records depend only on
/// the leaf path (plus dataset, b, G and tape), so they can be shared between
/// runs that agree on those inputs.
struct LeafRecord {
  LeafPath path;
  std::string key;                   ///< path.encode()
  std::vector<std::size_t> pool;     ///< consistent dataset indices, ascending
  std::vector<std::size_t> batch;    ///< selected minibatch indices
  bool labeled = false;
  std::vector<Label> labels;         ///< labels of `batch` once revealed
  std::size_t ones = 0;
  std::optional<LeafScore> best;     ///< set once scored

  bool pure() const { return ones == 0 || ones == batch.size(); }
};

using LeafCache = std::unordered_map<std::string, LeafRecord>;

/// Frontier entry: a splittable leaf and its best candidate split.
struct Candidate {
  double gain = 0.0;
  std::string key;
  std::size_t coord = 0;
  NodeId node = 0;
};

/// Priority order: larger gain, then smaller path encoding, then smaller coordinate.
struct CandidateOrder {
  bool operator()(const Candidate& a, const Candidate& b) const;
};

/// Shared growth loop behind every learner. Each leaf gets one minibatch,
/// drawn when the leaf is created and keyed on the tape by its path; its best
/// split is scored once and kept in the frontier until the leaf is split.
class GrowthEngine {
 public:
  using LabelSource = std::function<Label(std::size_t index)>;

  struct Options {
    std::size_t target_size = 1;             ///< t
    std::optional<std::size_t> batch_size;   ///< b; nullopt scores on every consistent point
    std::optional<std::size_t> depth_cap;    ///< D; only leaves of depth <= D are split
    bool stop_on_estimate = false;           ///< stop once e >= t instead of size >= t
    /// Grow only leaves reached by a tracked point (strands or focus points).
    bool tracked_only = false;
  };

  GrowthEngine(const ImpurityFunction& g, std::size_t dimension, std::span<const Point> points,
               LabelSource labels, const RandomnessTape& tape, Options options,
               std::shared_ptr<LeafCache> cache = nullptr);

  /// Points whose leaf depths define the size estimate e.
  void set_strands(std::vector<Point> strands);
  /// Extra point whose strand is grown without entering e.
  void add_focus(const Point& x);
  /// Called each time a non-empty batch is labeled for the first time.
  void set_batch_hook(std::function<void()> hook);

  /// Performs one split. Returns false once the stopping rule holds or no
  /// splittable leaf remains.
  bool step();
  void run();

  bool stopped() const;
  const PartialTree& tree() const { return tree_; }
  const RunTrace& trace() const { return trace_; }
  /// Mean of 2^depth over the strands; 1 when no strands are set.
  double size_estimate() const;
  std::size_t splits() const { return trace_.size(); }

  /// Splittable leaves in priority order (empty before the first step).
  std::vector<Candidate> frontier() const { return {frontier_.begin(), frontier_.end()}; }
  /// Record of a materialized leaf (labels its batch if needed).
  const LeafRecord& record(NodeId leaf);
  bool has_record(NodeId leaf) const;

  /// round(mean batch label) at `leaf`; 0 for an empty batch.
  Label completion_label(NodeId leaf);
  /// Leaf reached by x, for the focus or any other point.
  NodeId leaf_of(const Point& x) const { return tree_.leaf_of(x); }
  /// Labels every leaf; only meaningful when every leaf is materialized.
  DecisionTree completion();

  const GrowthEngine::Options& options() const { return options_; }
  const ImpurityFunction& impurity() const { return g_; }

 private:
  LeafRecord& materialize(NodeId leaf);
  void ensure_labeled(LeafRecord& rec);
  void consider(NodeId leaf);
  bool relevant(NodeId leaf) const;
  void track(const Point& x, bool strand);

  ImpurityFunction g_;
  std::size_t dimension_;
  std::span<const Point> points_;
  LabelSource labels_;
  RandomnessTape tape_;
  Options options_;
  std::shared_ptr<LeafCache> cache_;
  std::function<void()> batch_hook_;
  bool started_ = false;

  PartialTree tree_;
  RunTrace trace_;
  std::vector<LeafRecord*> node_records_;  // by node id, null if not materialized
  std::set<Candidate, CandidateOrder> frontier_;

  // Tracked points, grouped by the node that currently holds them.
  std::vector<Point> tracked_;
  std::vector<bool> is_strand_;
  std::vector<std::vector<std::size_t>> members_;  // by node id
  std::size_t strand_count_ = 0;
  std::uint64_t estimate_sum_ = 0;  // sum over strands of 2^depth
};

struct GrowthResult {
  DecisionTree tree;
  RunTrace trace;
  double size_estimate = 1.0;  ///< final e (size-estimate learner only)
};

/// Greedy growth scored on all of S, without a depth cap, until size t or no
/// splittable leaf remains. Leaves are labeled by their mean label over S.
GrowthResult top_down_full(std::size_t t, const LabeledDataset& data, const ImpurityFunction& g);

/// Minibatch growth with depth cap D = floor(log2 t + log2 log2 t) until
/// size t; output is the minibatch completion.
GrowthResult minibatch_top_down(std::size_t t, std::size_t b, const LabeledDataset& data, const ImpurityFunction& g,
                                const RandomnessTape& tape);

/// b uniform cube points from the tape's strand stream.
std::vector<Point> draw_strands(std::size_t b, std::size_t dimension, const RandomnessTape& tape);

/// As minibatch_top_down but stops once the strand size estimate reaches t.
/// `strands` overrides the tape-drawn strand points.
GrowthResult top_down_size_estimate(std::size_t t, std::size_t b, const LabeledDataset& data,
                                    const ImpurityFunction& g, const RandomnessTape& tape,
                                    std::optional<std::vector<Point>> strands = std::nullopt);

}  // namespace treelab
