#pragma once
// The discussion service: registration, themes, the post pipeline
// (moderate, persist, extract, attach, count, broadcast), facilitator ticks,
// read views and transcript import. Mutations of one theme are serialized;
// reads take a shared lock and see a consistent state.

#include "ibis/error.hpp"
#include "ibis/events.hpp"
#include "ibis/extraction.hpp"
#include "ibis/facilitator.hpp"
#include "ibis/forum.hpp"
#include "ibis/moderation.hpp"
#include "ibis/store.hpp"
#include "ibis/transcript.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace ibis {

struct ServiceOptions {
    std::string admin_token;
    FacilitatorPolicy default_policy;
    ModerationRule moderation;
    TemplateSet templates;
    std::function<Timestamp()> clock = now_ms;
    std::shared_ptr<IdentityProvider> identity = std::make_shared<IdentityProvider>();
};

struct Submission {
    ParticipantId author;
    ThemeId theme_id;
    std::optional<PostId> parent_post_id;  // absent or the theme post id: reply to the theme
    std::string text;
    std::optional<int> satisfaction;
};

struct SubmitResult {
    Post post;
    ExtractionResult extraction;
};

/// Outcome of one facilitator tick that posted.
struct AgentPostResult {
    Post post;
    std::optional<AttachedNode> attached;
};

enum class ReplayClock { Instantaneous, RealTime };

struct ImportRejection {
    std::string record_id;
    ErrorCode code;
    std::string reason;
};

struct ImportReport {
    std::size_t records = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t agent_records = 0;
    std::size_t nodes_attached = 0;
    std::size_t unlinked = 0;  // sentences left out of the tree
    std::vector<ImportRejection> rejections;
};

nlohmann::json import_report_to_json(const ImportReport& report);
nlohmann::json stats_to_json(const DiscussionStats& stats);
nlohmann::json extraction_to_json(const ExtractionResult& result);

class ForumService {
public:
    /// Loads everything already in `store`.
    ForumService(Store& store, std::shared_ptr<Classifier> classifier, ServiceOptions options);
    ~ForumService();
    ForumService(const ForumService&) = delete;
    ForumService& operator=(const ForumService&) = delete;

    // participants
    /// Errors: ConsentRequired, InvalidEmail, InvalidText (blank name), DuplicateEmail.
    ParticipantProfile register_participant(const Registration& registration);
    std::optional<ParticipantProfile> participant(ParticipantId id) const;
    std::vector<ParticipantProfile> participants() const;
    /// Display name; the facilitator identity for the agent.
    std::string author_name(ParticipantId id, ThemeId theme = ThemeId{}) const;
    std::size_t points(ParticipantId id) const;
    std::map<ParticipantId, std::size_t> point_ledger() const;

    // themes
    /// Errors: Unauthorized, InvalidText (blank title), InvalidPolicy.
    Theme create_theme(const std::string& title, const std::string& description, std::string_view admin_token,
                       std::optional<FacilitatorPolicy> policy = std::nullopt);
    std::vector<Theme> themes() const;
    /// Errors: UnknownTheme.
    Theme theme(ThemeId id) const;
    /// Errors: Unauthorized, UnknownTheme.
    Theme set_theme_open(ThemeId id, bool open, std::string_view admin_token);
    /// Replaces the policy; effective from the next tick. Errors: Unauthorized, UnknownTheme, InvalidPolicy.
    Theme configure_facilitator(ThemeId id, const FacilitatorPolicy& policy, std::string_view admin_token);

    // posting
    /// Errors: UnknownTheme, ThemeClosed, Unregistered, InvalidSatisfaction,
    /// InvalidText, UnknownParentPost, ModerationRejected (detail: the term),
    /// StorageFailure. On error nothing is stored or broadcast.
    SubmitResult submit_post(const Submission& submission);

    /// One facilitator tick for `theme` at `now`. Errors: UnknownTheme.
    std::optional<AgentPostResult> run_tick(ThemeId theme, Timestamp now);

    /// Errors: Unauthorized, UnknownTheme, ThemeNotEmpty. The whole import is
    /// one transaction; records the pipeline refuses are counted as rejected.
    ImportReport import_transcript(ThemeId theme, const std::vector<TranscriptRecord>& records, ReplayClock clock,
                                   std::string_view admin_token);

    // reads (all Errors: UnknownTheme)
    std::vector<Post> posts(ThemeId theme) const;
    nlohmann::json get_tree(ThemeId theme) const;
    std::string get_summary(ThemeId theme) const;
    DiscussionStats get_stats(ThemeId theme) const;
    FacilitatorState facilitator_state(ThemeId theme) const;
    ThemeSnapshot snapshot(ThemeId theme) const;
    /// JSON list of posts with author names, as served to clients.
    nlohmann::json posts_json(ThemeId theme) const;

    EventBus& events() noexcept { return events_; }
    Timestamp now() const { return options_.clock(); }
    bool is_admin(std::string_view token) const noexcept;

private:
    struct ThemeEntry;
    struct PendingEvent {
        std::string type;
        nlohmann::json data;
    };

    ThemeEntry& entry(ThemeId id) const;
    void require_admin(std::string_view token) const;
    std::string name_of(ParticipantId id, const Theme& theme) const;
    ParticipantProfile register_locked(const Registration& registration);
    /// Checks that do not depend on the theme's state. Errors as submit_post.
    void check_submission(ParticipantId author, const std::string& text, std::optional<int> satisfaction) const;
    DiscussionStats stats_locked(const ThemeEntry& e) const;

    /// Persists and applies one participant post; on error the theme is
    /// left as it was. Events to broadcast are appended to `out`.
    SubmitResult ingest(ThemeEntry& e, const Post& post, const ExtractionOptions& options,
                        std::vector<PendingEvent>& out);
    /// Persists and applies one agent post with the facilitator state that
    /// goes with it.
    AgentPostResult ingest_agent(ThemeEntry& e, const Post& post, std::optional<NodeId> target,
                                 const FacilitatorState& next_state, std::vector<PendingEvent>& out);
    void publish(const ThemeEntry& e, std::vector<PendingEvent>& events, bool with_stats);

    Store& store_;
    std::shared_ptr<Classifier> classifier_;
    ServiceOptions options_;
    EventBus events_;

    mutable std::shared_mutex participants_mutex_;
    std::map<ParticipantId, ParticipantProfile> participants_;
    std::unordered_map<std::string, ParticipantId> by_email_;

    mutable std::mutex points_mutex_;
    std::map<ParticipantId, std::size_t> points_;

    mutable std::shared_mutex themes_mutex_;
    std::map<ThemeId, std::unique_ptr<ThemeEntry>> themes_;

    IdSequence<ParticipantId> participant_ids_{kFirstParticipantId};
    IdSequence<ThemeId> theme_ids_{1};
    IdSequence<PostId> post_ids_{1};
};

/// Depth-first outline, one "[TYPE] text (author)" line per node, two spaces
/// of indent per level, children in creation order.
std::string render_outline(const DiscussionTree& tree, const std::function<std::string(ParticipantId)>& author_name);

}  // namespace ibis
