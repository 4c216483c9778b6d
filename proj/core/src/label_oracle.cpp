#include "treelab/label_oracle.hpp"

#include <stdexcept>

namespace treelab {

namespace {

template <typename Map>
void bump(Map& counts, std::string_view phase) {
  auto it = counts.find(phase);
  if (it == counts.end()) {
    counts.emplace(std::string(phase), 1);
  } else {
    ++it->second;
  }
}

}  // namespace

LabelOracle::LabelOracle(std::vector<Label> table)
    : labeler_([table = std::move(table)](std::size_t index) -> Label {
        if (index >= table.size()) throw std::out_of_range("label index out of range");
        return table[index];
      }) {}

LabelOracle::LabelOracle(Labeler labeler) : labeler_(std::move(labeler)) {
  if (!labeler_) throw std::invalid_argument("label oracle needs a labeler");
}

Label LabelOracle::label(std::size_t index, std::string_view phase) {
  if (auto it = cache_.find(index); it != cache_.end()) return it->second;
  const Label y = labeler_(index);
  if (y > 1) throw std::invalid_argument("labeler returned a label other than 0 or 1");
  cache_.emplace(index, y);
  bump(phase_labels_, phase);
  return y;
}

void LabelOracle::note_batch(std::string_view phase) {
  ++batches_;
  bump(phase_batches_, phase);
}

}  // namespace treelab
