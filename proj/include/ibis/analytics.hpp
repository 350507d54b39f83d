#pragma once
// Time-window comparison of a theme's discussion: IBIS counts per window and
// three engagement measures, plus a CSV export.
//
// Engagement measures over participant posts created in the window:
//   posts_per_participant_per_day = posts / (distinct authors * window days)
//   reply_rate = share of those posts that received a participant reply
//   median_time_to_first_reply   = median delay to the first participant reply
// Replies are counted whenever they were made; agent posts are not replies.

#include "ibis/forum.hpp"
#include "ibis/model.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace ibis {

/// Half-open interval [start, end).
struct PhaseWindow {
    std::string label;
    Timestamp start{};
    Timestamp end{};

    /// Errors: InvalidWindow when start >= end.
    void validate() const;
    bool contains(Timestamp t) const noexcept { return start <= t && t < end; }

    friend bool operator==(const PhaseWindow&, const PhaseWindow&) = default;
};

struct PhaseReport {
    PhaseWindow window;
    DiscussionStats stats;
    double posts_per_participant_per_day = 0.0;
    double reply_rate = 0.0;
    std::chrono::milliseconds median_time_to_first_reply{0};

    friend bool operator==(const PhaseReport&, const PhaseReport&) = default;
};

/// IBIS counts of participant nodes created in the window; agent and
/// participant posts in the window are counted separately.
DiscussionStats phase_stats(const ThemeSnapshot& snapshot, const PhaseWindow& window);

PhaseReport responsiveness(const ThemeSnapshot& snapshot, const PhaseWindow& window);

inline constexpr const char* kExportHeader =
    "label,issues,ideas,pros,cons,total,agent_posts,posts_per_participant_per_day,reply_rate,median_ttfr_seconds";

/// Header plus one row per window, in the given order.
std::string export_csv(const ThemeSnapshot& snapshot, const std::vector<PhaseWindow>& windows);

/// A window covering every post and node of the theme.
PhaseWindow whole_run_window(const ThemeSnapshot& snapshot, std::string label = "all");

}  // namespace ibis
