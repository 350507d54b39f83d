#include "ibis/transcript.hpp"

#include "ibis/error.hpp"
#include "ibis/random.hpp"
#include "ibis/text.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <unordered_set>

#include <json.hpp>

namespace ibis {

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& why)
{
    throw Error(ErrorCode::MalformedTranscript, "transcript line " + std::to_string(line) + ": " + why,
                std::to_string(line));
}

std::optional<std::string> id_field(const nlohmann::json& j, const char* key, std::size_t line)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
    malformed(line, std::string(key) + " must be a string or integer");
}

TranscriptRecord parse_record(const nlohmann::json& j, std::size_t line)
{
    if (!j.is_object()) malformed(line, "record is not an object");
    TranscriptRecord r;
    auto id = id_field(j, "record_id", line);
    if (!id || id->empty()) malformed(line, "missing record_id");
    r.record_id = *id;
    r.parent_record_id = id_field(j, "parent_record_id", line);

    if (auto it = j.find("is_agent"); it != j.end() && !it->is_null()) {
        if (!it->is_boolean()) malformed(line, "is_agent must be a boolean");
        r.is_agent = it->get<bool>();
    }
    if (auto it = j.find("author_name"); it != j.end() && it->is_string()) r.author_name = it->get<std::string>();
    if (!r.is_agent && text::is_blank(r.author_name)) malformed(line, "missing author_name");

    auto ts = j.find("timestamp");
    if (ts == j.end() || !ts->is_number_integer()) malformed(line, "timestamp must be an integer (epoch ms)");
    r.timestamp = from_epoch_ms(ts->get<std::int64_t>());

    auto txt = j.find("text");
    if (txt == j.end() || !txt->is_string()) malformed(line, "missing text");
    r.text = txt->get<std::string>();

    if (auto it = j.find("satisfaction"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) malformed(line, "satisfaction must be an integer");
        r.satisfaction = it->get<int>();
    }
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
        auto label = it->is_string() ? parse_node_type(it->get<std::string>()) : std::nullopt;
        if (!label) malformed(line, "unknown label");
        r.label = label;
    }
    return r;
}

}  // namespace

std::vector<TranscriptRecord> read_transcript(std::istream& in)
{
    std::vector<TranscriptRecord> records;
    std::unordered_set<std::string> seen;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (text::is_blank(raw)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(raw);
        } catch (const nlohmann::json::exception& e) {
            malformed(line, std::string("not valid JSON: ") + e.what());
        }
        TranscriptRecord r = parse_record(j, line);
        if (seen.contains(r.record_id)) malformed(line, "duplicate record_id " + r.record_id);
        if (r.parent_record_id && !seen.contains(*r.parent_record_id)) {
            malformed(line, "parent_record_id " + *r.parent_record_id + " does not name an earlier record");
        }
        if (!records.empty() && r.timestamp < records.back().timestamp) malformed(line, "timestamps go backwards");
        seen.insert(r.record_id);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<TranscriptRecord> load_transcript(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::StorageFailure, "cannot open transcript " + path.string());
    return read_transcript(in);
}

void write_transcript(std::ostream& out, const std::vector<TranscriptRecord>& records)
{
    for (const TranscriptRecord& r : records) {
        nlohmann::ordered_json j;
        j["record_id"] = r.record_id;
        j["author_name"] = r.author_name;
        j["is_agent"] = r.is_agent;
        if (r.parent_record_id) j["parent_record_id"] = *r.parent_record_id;
        j["timestamp"] = to_epoch_ms(r.timestamp);
        j["text"] = r.text;
        if (r.satisfaction) j["satisfaction"] = *r.satisfaction;
        if (r.label) j["label"] = to_string(*r.label);
        out << j.dump() << '\n';
    }
}

std::vector<FixturePhase> default_fixture_phases()
{
    using namespace std::chrono;
    const Timestamp start = from_epoch_ms(1577836800000);  // 2020-01-01T00:00:00Z
    const Timestamp switch_at = start + duration_cast<Millis>(days{30});
    const Timestamp end = switch_at + duration_cast<Millis>(days{90});
    // Order of counts: issue, idea, pros, cons.
    return {
        FixturePhase{"without-agent", start, switch_at, {1000, 600, 200, 400}},
        FixturePhase{"with-agent", switch_at, end, {833, 1262, 556, 253}},
    };
}

namespace {

constexpr std::size_t kRecentWindow = 40;

const std::vector<std::string> kTopics{"public transport", "water supply", "schools",      "clinics",
                                       "parks",            "housing",      "waste collection", "street lighting"};

std::string fixture_text(NodeType type, std::size_t n)
{
    const std::string& topic = kTopics[n % kTopics.size()];
    const std::string district = std::to_string(n % 97 + 1);
    switch (type) {
        case NodeType::Issue: return "How can we improve " + topic + " in district " + district + "?";
        case NodeType::Idea: return "We should expand " + topic + " programs in district " + district + ".";
        case NodeType::Pros: return "This would help families with " + topic + " in district " + district + ".";
        case NodeType::Cons: return "This could be too costly for " + topic + " in district " + district + ".";
    }
    return topic;
}

class ParentPicker {
public:
    explicit ParentPicker(std::mt19937_64& rng) : rng_(rng) {}

    void remember(NodeType type, const std::string& record_id) { pool(type).push_back(record_id); }

    /// nullopt means "reply to the theme"; only ideas may do that.
    std::optional<std::string> pick(NodeType type)
    {
        switch (type) {
            case NodeType::Idea:
                if (!pool(NodeType::Issue).empty() && uniform_below(rng_, 2) == 0) return recent(NodeType::Issue);
                return std::nullopt;
            case NodeType::Issue:
                if (!pool(NodeType::Cons).empty() && uniform_below(rng_, 3) == 0) return recent(NodeType::Cons);
                return recent(NodeType::Idea);
            case NodeType::Pros:
            case NodeType::Cons: return recent(NodeType::Idea);
        }
        return std::nullopt;
    }

private:
    std::vector<std::string>& pool(NodeType t) { return pools_[static_cast<std::size_t>(t)]; }

    std::string recent(NodeType t)
    {
        const auto& p = pool(t);
        const std::size_t window = std::min(kRecentWindow, p.size());
        return p[p.size() - 1 - uniform_below(rng_, window)];
    }

    std::mt19937_64& rng_;
    std::array<std::vector<std::string>, 4> pools_;
};

}  // namespace

std::vector<TranscriptRecord> synthetic_transcript(const std::vector<FixturePhase>& phases, std::size_t authors,
                                                   std::uint64_t seed)
{
    if (authors == 0) throw Error(ErrorCode::OutOfRange, "fixture needs at least one author");
    std::mt19937_64 rng(seed);
    ParentPicker parents(rng);
    std::vector<TranscriptRecord> out;
    bool have_idea = false;

    for (const FixturePhase& phase : phases) {
        if (phase.start >= phase.end) throw Error(ErrorCode::InvalidWindow, "fixture phase " + phase.label + " is empty");
        std::vector<NodeType> labels;
        for (NodeType t : kAllNodeTypes) labels.insert(labels.end(), phase.counts[static_cast<std::size_t>(t)], t);
        if (labels.empty()) continue;
        shuffle_in_place(labels, rng);
        if (!have_idea) {
            // Issues, pros and cons all need an earlier idea to reply to.
            auto first_idea = std::find(labels.begin(), labels.end(), NodeType::Idea);
            if (first_idea == labels.end()) throw Error(ErrorCode::OutOfRange, "the first fixture phase needs an idea");
            std::iter_swap(labels.begin(), first_idea);
        }

        const auto span = (phase.end - phase.start).count();
        const auto n = static_cast<std::int64_t>(labels.size());
        if (span < n) throw Error(ErrorCode::InvalidWindow, "fixture phase " + phase.label + " is too short");
        for (std::int64_t i = 0; i < n; ++i) {
            const NodeType type = labels[static_cast<std::size_t>(i)];
            TranscriptRecord r;
            r.record_id = "r" + std::to_string(out.size() + 1);
            r.author_name = "citizen-" + std::to_string(uniform_below(rng, authors) + 1);
            r.timestamp = phase.start + Millis{(2 * i + 1) * span / (2 * n)};
            r.parent_record_id = parents.pick(type);
            r.text = fixture_text(type, out.size());
            if (uniform_below(rng, 2) == 0) r.satisfaction = static_cast<int>(uniform_below(rng, 10)) + 1;
            r.label = type;
            parents.remember(type, r.record_id);
            have_idea = have_idea || type == NodeType::Idea;
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace ibis
