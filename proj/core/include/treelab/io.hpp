#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "treelab/dataset.hpp"
#include "treelab/tree.hpp"

namespace treelab {

// Dataset text format: a `d n` header line, then n lines of d entries in
// {-1,1}, followed by a {0,1} label for labeled data.

LabeledDataset read_labeled_dataset(std::istream& in);
/// Accepts labeled files too; their labels are dropped.
UnlabeledDataset read_unlabeled_dataset(std::istream& in);
void write_dataset(std::ostream& out, const LabeledDataset& data);
void write_dataset(std::ostream& out, const UnlabeledDataset& data);

LabeledDataset load_labeled_dataset(const std::filesystem::path& path);
UnlabeledDataset load_unlabeled_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const LabeledDataset& data);

// Tree text format: `(leaf 0)`, `(leaf 1)`, `(split i NEG POS)` with i
// 1-based; single spaces, one line.

std::string format_tree(const DecisionTree& tree);
/// Parses a tree. Without `dimension` the smallest dimension covering every
/// queried coordinate is used.
DecisionTree parse_tree(std::string_view text, std::optional<std::size_t> dimension = std::nullopt);

DecisionTree load_tree(const std::filesystem::path& path, std::optional<std::size_t> dimension = std::nullopt);
void save_tree(const std::filesystem::path& path, const DecisionTree& tree);

}  // namespace treelab
