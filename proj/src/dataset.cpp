#include "ibis/dataset.hpp"

#include "ibis/error.hpp"
#include "ibis/text.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <ostream>

namespace ibis {

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& why)
{
    throw Error(ErrorCode::MalformedDataset, "line " + std::to_string(line) + ": " + why);
}

}  // namespace

LabeledDataset read_dataset(std::istream& in, std::string name)
{
    LabeledDataset ds;
    ds.name = std::move(name);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::is_blank(line)) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            malformed(line_no, e.what());
        }
        if (!rec.is_object() || !rec.contains("text") || !rec["text"].is_string() || !rec.contains("label") ||
            !rec["label"].is_string()) {
            malformed(line_no, "expected string fields text and label");
        }
        LabeledItem item;
        item.text = rec["text"].get<std::string>();
        if (text::is_blank(item.text)) malformed(line_no, "blank text");
        auto label = parse_node_type(rec["label"].get<std::string>());
        if (!label) malformed(line_no, "unknown label " + rec["label"].dump());
        item.label = *label;
        if (rec.contains("parent_index") && !rec["parent_index"].is_null()) {
            if (!rec["parent_index"].is_number_unsigned()) malformed(line_no, "parent_index must be a non-negative integer");
            auto parent = rec["parent_index"].get<std::size_t>();
            if (parent >= ds.items.size()) malformed(line_no, "parent_index must reference an earlier item");
            item.parent_index = parent;
        }
        ds.items.push_back(std::move(item));
    }
    return ds;
}

LabeledDataset load_dataset(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MalformedDataset, "cannot open " + path.string());
    return read_dataset(in, path.stem().string());
}

void write_dataset(std::ostream& out, const LabeledDataset& dataset)
{
    for (const LabeledItem& item : dataset.items) {
        nlohmann::json rec{{"text", item.text}, {"label", to_string(item.label)}};
        if (item.parent_index) rec["parent_index"] = *item.parent_index;
        out << rec.dump() << '\n';
    }
}

}  // namespace ibis
