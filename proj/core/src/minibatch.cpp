#include "treelab/minibatch.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace treelab {

std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t b,
                                                    RandomStream& stream) {
  if (b >= pool.size()) return pool;
  for (std::size_t k = 0; k < b; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(stream.uniform_below(pool.size() - k));
    std::swap(pool[k], pool[j]);
  }
  pool.resize(b);
  return pool;
}

std::vector<std::size_t> consistent_indices(std::span<const Point> points, const LeafPath& leaf) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (leaf.consistent(points[i])) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> draw_batch_indices(std::vector<std::size_t> consistent_pool, std::size_t b,
                                            const RandomnessTape& tape, std::string_view key) {
  if (b == 0) throw std::invalid_argument("minibatch size b must be at least 1");
  auto stream = tape.stream(tape_domain::kBatch, key);
  return sample_without_replacement(std::move(consistent_pool), b, stream);
}

namespace {

template <typename Dataset>
Minibatch draw_from(const Dataset& dataset, const LeafPath& leaf, std::size_t b,
                    const RandomnessTape& tape, std::string_view key) {
  const std::string encoded = key.empty() ? leaf.encode() : std::string(key);
  Minibatch batch;
  batch.leaf = leaf;
  batch.indices = draw_batch_indices(consistent_indices(dataset.points(), leaf), b, tape, encoded);
  batch.points.reserve(batch.indices.size());
  for (std::size_t i : batch.indices) batch.points.push_back(dataset.point(i));
  return batch;
}

}  // namespace

Minibatch draw_minibatch(const LabeledDataset& dataset, const LeafPath& leaf, std::size_t b,
                         const RandomnessTape& tape, std::string_view key) {
  Minibatch batch = draw_from(dataset, leaf, b, tape, key);
  batch.labels.reserve(batch.indices.size());
  for (std::size_t i : batch.indices) batch.labels.push_back(dataset.label(i));
  return batch;
}

Minibatch draw_minibatch(const UnlabeledDataset& dataset, const LeafPath& leaf, std::size_t b,
                         const RandomnessTape& tape, std::string_view key) {
  return draw_from(dataset, leaf, b, tape, key);
}

}  // namespace treelab
