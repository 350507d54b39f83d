#include "ibis/analytics.hpp"

#include "ibis/error.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

namespace ibis {

void PhaseWindow::validate() const
{
    if (!(start < end)) throw Error(ErrorCode::InvalidWindow, "window " + label + " must start before it ends");
}

DiscussionStats phase_stats(const ThemeSnapshot& snapshot, const PhaseWindow& window)
{
    window.validate();
    DiscussionStats s = count_elements(snapshot.tree, [&](const IbisNode& n) { return window.contains(n.created_at); });
    s.agent_posts = 0;
    s.participant_posts = 0;
    for (const Post& p : snapshot.posts) {
        if (!window.contains(p.created_at)) continue;
        ++(p.is_agent ? s.agent_posts : s.participant_posts);
    }
    return s;
}

PhaseReport responsiveness(const ThemeSnapshot& snapshot, const PhaseWindow& window)
{
    PhaseReport report;
    report.window = window;
    report.stats = phase_stats(snapshot, window);

    std::unordered_map<PostId, Timestamp> first_reply;
    for (const Post& p : snapshot.posts) {
        if (p.is_agent || !p.parent_post_id) continue;
        auto [it, fresh] = first_reply.try_emplace(*p.parent_post_id, p.created_at);
        if (!fresh && p.created_at < it->second) it->second = p.created_at;
    }

    std::size_t posts = 0;
    std::size_t replied = 0;
    std::unordered_set<ParticipantId> authors;
    std::vector<Millis> delays;
    for (const Post& p : snapshot.posts) {
        if (p.is_agent || !window.contains(p.created_at)) continue;
        ++posts;
        authors.insert(p.author_id);
        if (auto it = first_reply.find(p.post_id); it != first_reply.end()) {
            ++replied;
            delays.push_back(std::max(Millis{0}, it->second - p.created_at));
        }
    }

    const double days = std::chrono::duration<double, std::ratio<86400>>(window.end - window.start).count();
    if (posts > 0) {
        report.posts_per_participant_per_day = static_cast<double>(posts) / (static_cast<double>(authors.size()) * days);
        report.reply_rate = static_cast<double>(replied) / static_cast<double>(posts);
    }
    if (!delays.empty()) {
        std::sort(delays.begin(), delays.end());
        const std::size_t mid = delays.size() / 2;
        report.median_time_to_first_reply = delays.size() % 2 == 1 ? delays[mid] : (delays[mid - 1] + delays[mid]) / 2;
    }
    return report;
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string export_csv(const ThemeSnapshot& snapshot, const std::vector<PhaseWindow>& windows)
{
    for (const PhaseWindow& w : windows) w.validate();
    std::string out = std::string(kExportHeader) + "\n";
    for (const PhaseWindow& w : windows) {
        const PhaseReport r = responsiveness(snapshot, w);
        const DiscussionStats& s = r.stats;
        out += csv_field(w.label) + "," + std::to_string(s.issues) + "," + std::to_string(s.ideas) + "," +
               std::to_string(s.pros) + "," + std::to_string(s.cons) + "," + std::to_string(s.total) + "," +
               std::to_string(s.agent_posts) + "," + fixed(r.posts_per_participant_per_day, 6) + "," +
               fixed(r.reply_rate, 6) + "," + fixed(static_cast<double>(r.median_time_to_first_reply.count()) / 1000.0, 3) +
               "\n";
    }
    return out;
}

PhaseWindow whole_run_window(const ThemeSnapshot& snapshot, std::string label)
{
    Timestamp first = snapshot.tree.root().created_at;
    Timestamp last = first;
    for (const IbisNode& n : snapshot.tree.nodes()) {
        first = std::min(first, n.created_at);
        last = std::max(last, n.created_at);
    }
    for (const Post& p : snapshot.posts) {
        first = std::min(first, p.created_at);
        last = std::max(last, p.created_at);
    }
    return PhaseWindow{std::move(label), first, last + Millis{1}};
}

}  // namespace ibis
