#pragma once
// Recorded or synthetic post sequences, one JSON record per line:
// {record_id, author_name, is_agent, parent_record_id?, timestamp, text,
//  satisfaction?, label?}

#include "ibis/ids.hpp"
#include "ibis/model.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ibis {

struct TranscriptRecord {
    std::string record_id;
    std::string author_name;
    bool is_agent = false;
    std::optional<std::string> parent_record_id;
    Timestamp timestamp{};
    std::string text;
    std::optional<int> satisfaction;
    std::optional<NodeType> label;  // gold type; skips classification

    friend bool operator==(const TranscriptRecord&, const TranscriptRecord&) = default;
};

/// Parses and checks structure: required fields, unique record ids, parents
/// that refer to earlier records, non-decreasing timestamps. Blank lines are
/// skipped. Errors: MalformedTranscript with the 1-based line number as detail.
std::vector<TranscriptRecord> read_transcript(std::istream& in);
std::vector<TranscriptRecord> load_transcript(const std::filesystem::path& path);
void write_transcript(std::ostream& out, const std::vector<TranscriptRecord>& records);

/// One stretch of a synthetic discussion with fixed label counts.
struct FixturePhase {
    std::string label;
    Timestamp start{};
    Timestamp end{};
    std::array<std::size_t, 4> counts{};  // indexed by NodeType
};

/// Two phases, a one-month stretch followed by three months, whose label
/// totals are 1833 issues, 1862 ideas, 756 pros and 653 cons. The first
/// phase leans to issues and cons, the second to ideas and pros.
std::vector<FixturePhase> default_fixture_phases();

/// Gold-labelled transcript with the requested counts per phase. Every
/// record replies to a record whose type makes the link legal (ideas may
/// also reply to the theme), so ingestion links every node. Deterministic
/// for a given seed.
std::vector<TranscriptRecord> synthetic_transcript(const std::vector<FixturePhase>& phases, std::size_t authors,
                                                   std::uint64_t seed);

}  // namespace ibis
