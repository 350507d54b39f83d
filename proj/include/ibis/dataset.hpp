#pragma once
// Labeled sentence datasets for classifier evaluation. On disk: JSON Lines,
// one record per line: {"text": ..., "label": "issue|idea|pros|cons",
// "parent_index": 0-based earlier item (optional)}.

#include "ibis/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ibis {

struct LabeledItem {
    std::string text;
    NodeType label = NodeType::Idea;
    std::optional<std::size_t> parent_index;
};

struct LabeledDataset {
    std::string name;
    std::vector<LabeledItem> items;

    std::size_t size() const noexcept { return items.size(); }
};

/// Errors: MalformedDataset (message names the 1-based line).
LabeledDataset read_dataset(std::istream& in, std::string name);
LabeledDataset load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const LabeledDataset& dataset);

}  // namespace ibis
