#include "ibis/service.hpp"

#include "ibis/error.hpp"
#include "ibis/text.hpp"
#include "ibis/tree_document.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

namespace ibis {

struct ForumService::ThemeEntry {
    ThemeEntry(Theme t, DiscussionTree tr, FacilitatorState s, std::vector<Post> p)
        : theme(std::move(t)), tree(std::move(tr)), state(std::move(s)), posts(std::move(p)),
          node_ids(tree.next_free_id().value)
    {
        for (std::size_t i = 0; i < posts.size(); ++i) post_index.emplace(posts[i].post_id, i);
    }

    mutable std::shared_mutex mutex;
    Theme theme;
    DiscussionTree tree;
    FacilitatorState state;
    std::vector<Post> posts;
    std::unordered_map<PostId, std::size_t> post_index;
    IdSequence<NodeId> node_ids;

    Timestamp next_post_time(Timestamp now) const { return posts.empty() ? now : std::max(now, posts.back().created_at); }

    void push_post(const Post& p)
    {
        post_index.emplace(p.post_id, posts.size());
        posts.push_back(p);
    }
};

namespace {

constexpr const char* kAdministratorName = "Administrator";

nlohmann::json attached_to_json(const AttachedNode& a)
{
    return {{"node", node_to_json(a.node)}, {"link", link_to_json(a.link)}};
}

bool tokens_equal(std::string_view a, std::string_view b) noexcept
{
    if (a.size() != b.size()) return false;
    unsigned char diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<unsigned char>(a[i] ^ b[i]);
    return diff == 0;
}

std::string email_key(std::string_view email) { return text::to_lower(text::trim(email)); }

}  // namespace

nlohmann::json stats_to_json(const DiscussionStats& s)
{
    return {
        {"issues", s.issues},
        {"ideas", s.ideas},
        {"pros", s.pros},
        {"cons", s.cons},
        {"total", s.total},
        {"agent_posts", s.agent_posts},
        {"participant_posts", s.participant_posts},
    };
}

nlohmann::json extraction_to_json(const ExtractionResult& r)
{
    nlohmann::json attached = nlohmann::json::array();
    for (const AttachedNode& a : r.attached) attached.push_back(attached_to_json(a));
    nlohmann::json unlinked = nlohmann::json::array();
    for (const IbisNode& n : r.unlinked) unlinked.push_back(node_to_json(n));
    return {{"attached", attached}, {"unlinked", unlinked}, {"warnings", r.warnings}, {"used_fallback", r.used_fallback}};
}

nlohmann::json import_report_to_json(const ImportReport& r)
{
    nlohmann::json rejections = nlohmann::json::array();
    for (const ImportRejection& x : r.rejections) {
        rejections.push_back({{"record_id", x.record_id}, {"error", to_string(x.code)}, {"reason", x.reason}});
    }
    return {
        {"records", r.records},   {"accepted", r.accepted}, {"rejected", r.rejected},
        {"agent_records", r.agent_records}, {"nodes_attached", r.nodes_attached}, {"unlinked", r.unlinked},
        {"rejections", rejections},
    };
}

ForumService::ForumService(Store& store, std::shared_ptr<Classifier> classifier, ServiceOptions options)
    : store_(store), classifier_(std::move(classifier)), options_(std::move(options))
{
    if (!classifier_) classifier_ = std::make_shared<RuleClassifier>();
    if (!options_.identity) options_.identity = std::make_shared<IdentityProvider>();
    options_.default_policy.validate();

    for (ParticipantProfile& p : store_.load_participants()) {
        participant_ids_.advance_past(p.participant_id);
        by_email_.emplace(email_key(p.email), p.participant_id);
        participants_.emplace(p.participant_id, std::move(p));
    }
    points_ = store_.load_points();
    for (StoredTheme& t : store_.load_themes()) {
        theme_ids_.advance_past(t.theme.theme_id);
        for (const Post& p : t.posts) post_ids_.advance_past(p.post_id);
        const ThemeId id = t.theme.theme_id;
        themes_.emplace(id, std::make_unique<ThemeEntry>(std::move(t.theme), std::move(t.tree), std::move(t.state),
                                                         std::move(t.posts)));
    }
}

ForumService::~ForumService() { events_.close_all(); }

bool ForumService::is_admin(std::string_view token) const noexcept
{
    return !options_.admin_token.empty() && tokens_equal(token, options_.admin_token);
}

void ForumService::require_admin(std::string_view token) const
{
    if (!is_admin(token)) throw Error(ErrorCode::Unauthorized, "administrator credentials required");
}

ForumService::ThemeEntry& ForumService::entry(ThemeId id) const
{
    std::shared_lock lock(themes_mutex_);
    auto it = themes_.find(id);
    if (it == themes_.end()) throw Error(ErrorCode::UnknownTheme, "unknown theme " + std::to_string(id.value));
    return *it->second;
}

// ---- participants ----------------------------------------------------------

ParticipantProfile ForumService::register_participant(const Registration& r)
{
    Store::Transaction tx(store_);
    ParticipantProfile p = register_locked(r);
    tx.commit();
    std::unique_lock lock(participants_mutex_);
    by_email_.emplace(email_key(p.email), p.participant_id);
    participants_.emplace(p.participant_id, p);
    return p;
}

// Runs inside a store transaction; the caller publishes the profile to the
// in-memory maps once the transaction commits.
ParticipantProfile ForumService::register_locked(const Registration& r)
{
    if (!r.consent) throw Error(ErrorCode::ConsentRequired, "consent is required to take part");
    if (text::is_blank(r.name)) throw Error(ErrorCode::InvalidText, "name must not be blank");
    options_.identity->verify(r);

    std::shared_lock lock(participants_mutex_);
    if (by_email_.contains(email_key(r.email))) throw Error(ErrorCode::DuplicateEmail, "email already registered: " + r.email);
    lock.unlock();

    ParticipantProfile p;
    p.participant_id = participant_ids_.next();
    p.name = std::string(text::trim(r.name));
    p.gender = r.gender;
    p.email = std::string(text::trim(r.email));
    p.photo_ref = r.photo_ref;
    p.registered_at = options_.clock();
    p.consent = r.consent;
    store_.insert_participant(p);
    return p;
}

std::optional<ParticipantProfile> ForumService::participant(ParticipantId id) const
{
    std::shared_lock lock(participants_mutex_);
    auto it = participants_.find(id);
    if (it == participants_.end()) return std::nullopt;
    return it->second;
}

std::vector<ParticipantProfile> ForumService::participants() const
{
    std::shared_lock lock(participants_mutex_);
    std::vector<ParticipantProfile> out;
    for (const auto& [id, p] : participants_) out.push_back(p);
    return out;
}

std::string ForumService::name_of(ParticipantId id, const Theme& theme) const
{
    if (id == kFacilitatorId) return theme.policy.identity_name;
    if (id == kAdministratorId) return kAdministratorName;
    std::shared_lock lock(participants_mutex_);
    auto it = participants_.find(id);
    return it == participants_.end() ? "participant " + std::to_string(id.value) : it->second.name;
}

std::string ForumService::author_name(ParticipantId id, ThemeId theme) const
{
    if (id == kFacilitatorId) {
        std::shared_lock lock(themes_mutex_);
        auto it = themes_.find(theme);
        if (it == themes_.end()) return options_.default_policy.identity_name;
        std::shared_lock entry_lock(it->second->mutex);
        return it->second->theme.policy.identity_name;
    }
    return name_of(id, Theme{});
}

std::size_t ForumService::points(ParticipantId id) const
{
    std::lock_guard lock(points_mutex_);
    auto it = points_.find(id);
    return it == points_.end() ? 0 : it->second;
}

std::map<ParticipantId, std::size_t> ForumService::point_ledger() const
{
    std::lock_guard lock(points_mutex_);
    return points_;
}

// ---- themes ----------------------------------------------------------------

Theme ForumService::create_theme(const std::string& title, const std::string& description, std::string_view admin_token,
                                 std::optional<FacilitatorPolicy> policy)
{
    require_admin(admin_token);
    if (text::is_blank(title)) throw Error(ErrorCode::InvalidText, "theme title must not be blank");
    Theme t;
    t.title = std::string(text::trim(title));
    t.description = description;
    t.created_by = kAdministratorId;
    t.policy = policy.value_or(options_.default_policy);
    t.policy.validate();
    t.open = true;
    t.created_at = options_.clock();
    t.theme_id = theme_ids_.next();

    IbisNode root;
    root.node_id = NodeId{1};
    root.node_type = NodeType::Issue;
    root.text = t.title;
    root.author_id = kAdministratorId;
    root.source_post_id = kThemePostId;
    root.confidence = 1.0;
    root.created_at = t.created_at;

    DiscussionTree tree(t.theme_id, root);
    store_.insert_theme(t, root, FacilitatorState{});
    std::unique_lock lock(themes_mutex_);
    themes_.emplace(t.theme_id, std::make_unique<ThemeEntry>(t, std::move(tree), FacilitatorState{}, std::vector<Post>{}));
    return t;
}

std::vector<Theme> ForumService::themes() const
{
    std::shared_lock lock(themes_mutex_);
    std::vector<Theme> out;
    for (const auto& [id, e] : themes_) {
        std::shared_lock entry_lock(e->mutex);
        out.push_back(e->theme);
    }
    return out;
}

Theme ForumService::theme(ThemeId id) const
{
    ThemeEntry& e = entry(id);
    std::shared_lock lock(e.mutex);
    return e.theme;
}

Theme ForumService::set_theme_open(ThemeId id, bool open, std::string_view admin_token)
{
    require_admin(admin_token);
    ThemeEntry& e = entry(id);
    std::unique_lock lock(e.mutex);
    Theme updated = e.theme;
    updated.open = open;
    store_.update_theme(updated);
    e.theme = updated;
    return updated;
}

Theme ForumService::configure_facilitator(ThemeId id, const FacilitatorPolicy& policy, std::string_view admin_token)
{
    require_admin(admin_token);
    policy.validate();
    ThemeEntry& e = entry(id);
    std::unique_lock lock(e.mutex);
    Theme updated = e.theme;
    updated.policy = policy;
    store_.update_theme(updated);
    e.theme = updated;
    return updated;
}

// ---- posting ---------------------------------------------------------------

void ForumService::check_submission(ParticipantId author, const std::string& text_in, std::optional<int> satisfaction) const
{
    {
        std::shared_lock lock(participants_mutex_);
        auto it = participants_.find(author);
        if (it == participants_.end() || !it->second.consent) {
            throw Error(ErrorCode::Unregistered, "participant " + std::to_string(author.value) + " is not registered");
        }
    }
    if (satisfaction && (*satisfaction < 1 || *satisfaction > 10)) {
        throw Error(ErrorCode::InvalidSatisfaction, "satisfaction must be between 1 and 10");
    }
    if (text::is_blank(text_in)) throw Error(ErrorCode::InvalidText, "post text must not be blank");
    if (text::utf8_length(text_in) > kMaxPostLength) {
        throw Error(ErrorCode::InvalidText, "post text exceeds " + std::to_string(kMaxPostLength) + " characters");
    }
    if (auto term = moderate(text_in, options_.moderation)) {
        throw Error(ErrorCode::ModerationRejected, "post contains a blocked term: " + *term, *term);
    }
}

SubmitResult ForumService::submit_post(const Submission& s)
{
    ThemeEntry& e = entry(s.theme_id);
    check_submission(s.author, s.text, s.satisfaction);

    std::unique_lock lock(e.mutex);
    if (!e.theme.open) throw Error(ErrorCode::ThemeClosed, "theme " + std::to_string(s.theme_id.value) + " is closed");
    std::optional<PostId> parent = s.parent_post_id;
    if (parent == kThemePostId) parent.reset();
    if (parent && !e.post_index.contains(*parent)) {
        throw Error(ErrorCode::UnknownParentPost, "post " + std::to_string(parent->value) + " is not in this theme");
    }

    Post post;
    post.post_id = post_ids_.next();
    post.theme_id = s.theme_id;
    post.author_id = s.author;
    post.parent_post_id = parent;
    post.text = s.text;
    post.satisfaction = s.satisfaction;
    post.created_at = e.next_post_time(options_.clock());
    post.is_agent = false;

    std::vector<PendingEvent> events;
    SubmitResult result = ingest(e, post, {}, events);
    publish(e, events, true);
    return result;
}

SubmitResult ForumService::ingest(ThemeEntry& e, const Post& post, const ExtractionOptions& options,
                                  std::vector<PendingEvent>& out)
{
    const std::size_t before = e.tree.size();
    const FacilitatorState saved_state = e.state;
    ExtractionResult extraction;
    try {
        Store::Transaction tx(store_);
        store_.insert_post(post);
        extraction = extract_post(post, e.tree, *classifier_, e.node_ids, options);
        for (std::size_t i = 0; i < extraction.attached.size(); ++i) {
            const AttachedNode& a = extraction.attached[i];
            store_.insert_node(post.theme_id, a.node, a.link, before + i);
        }
        record_post(e.state, post);
        store_.save_facilitator_state(post.theme_id, e.state);
        store_.add_point(post.author_id);
        tx.commit();
    } catch (...) {
        e.tree.truncate(before);
        e.state = saved_state;
        throw;
    }

    e.push_post(post);
    {
        std::lock_guard lock(points_mutex_);
        ++points_[post.author_id];
    }
    out.push_back({event_type::kPostAccepted,
                   {{"post", post_to_json(post, name_of(post.author_id, e.theme))},
                    {"nodes", extraction.attached.size()},
                    {"unlinked", extraction.unlinked.size()}}});
    for (const AttachedNode& a : extraction.attached) out.push_back({event_type::kNodeAttached, attached_to_json(a)});
    return SubmitResult{post, std::move(extraction)};
}

AgentPostResult ForumService::ingest_agent(ThemeEntry& e, const Post& post, std::optional<NodeId> target,
                                           const FacilitatorState& next_state, std::vector<PendingEvent>& out)
{
    const std::size_t before = e.tree.size();
    AgentPostResult result{post, std::nullopt};
    try {
        Store::Transaction tx(store_);
        store_.insert_post(post);
        if (target) result.attached = attach_agent_post(post, *target, e.tree, e.node_ids);
        if (result.attached) store_.insert_node(post.theme_id, result.attached->node, result.attached->link, before);
        store_.save_facilitator_state(post.theme_id, next_state);
        tx.commit();
    } catch (...) {
        e.tree.truncate(before);
        throw;
    }

    e.state = next_state;
    e.push_post(post);
    nlohmann::json data{{"post", post_to_json(post, e.theme.policy.identity_name, e.theme.policy.disclose_identity)}};
    data["node"] = result.attached ? attached_to_json(*result.attached) : nlohmann::json(nullptr);
    out.push_back({event_type::kAgentPosted, data});
    if (result.attached) out.push_back({event_type::kNodeAttached, attached_to_json(*result.attached)});
    return result;
}

void ForumService::publish(const ThemeEntry& e, std::vector<PendingEvent>& events, bool with_stats)
{
    const ThemeId id = e.theme.theme_id;
    for (PendingEvent& ev : events) events_.publish(id, std::move(ev.type), std::move(ev.data));
    events.clear();
    if (with_stats && events_.subscriber_count(id) > 0) {
        events_.publish(id, event_type::kStatsUpdated, stats_to_json(stats_locked(e)));
    }
}

std::optional<AgentPostResult> ForumService::run_tick(ThemeId theme, Timestamp now)
{
    ThemeEntry& e = entry(theme);
    std::unique_lock lock(e.mutex);
    FacilitatorState next = e.state;
    auto facilitation = tick(next, e.theme.policy, e.tree, now, options_.templates,
                             [&](ParticipantId id) { return name_of(id, e.theme); });
    if (!facilitation) return std::nullopt;

    Post post;
    post.post_id = post_ids_.next();
    post.theme_id = theme;
    post.author_id = kFacilitatorId;
    post.parent_post_id = facilitation->reply_to == kThemePostId ? std::nullopt : std::optional(facilitation->reply_to);
    post.text = facilitation->text;
    post.created_at = e.next_post_time(now);
    post.is_agent = true;

    std::vector<PendingEvent> events;
    AgentPostResult result = ingest_agent(e, post, facilitation->target, next, events);
    publish(e, events, true);
    return result;
}

// ---- import ----------------------------------------------------------------

ImportReport ForumService::import_transcript(ThemeId theme, const std::vector<TranscriptRecord>& records,
                                             ReplayClock clock, std::string_view admin_token)
{
    require_admin(admin_token);
    ThemeEntry& e = entry(theme);
    std::unique_lock lock(e.mutex);
    if (!e.posts.empty()) throw Error(ErrorCode::ThemeNotEmpty, "theme " + std::to_string(theme.value) + " already has posts");

    // Structure is checked up front so a bad record ingests nothing.
    {
        std::unordered_set<std::string> seen;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const TranscriptRecord& r = records[i];
            const std::string line = std::to_string(i + 1);
            auto bad = [&](const std::string& why) {
                throw Error(ErrorCode::MalformedTranscript, "transcript line " + line + ": " + why, line);
            };
            if (r.record_id.empty() || !seen.insert(r.record_id).second) bad("missing or duplicate record_id");
            if (r.parent_record_id && !seen.contains(*r.parent_record_id)) bad("parent_record_id names no earlier record");
            if (i > 0 && r.timestamp < records[i - 1].timestamp) bad("timestamps go backwards");
            if (!r.is_agent && text::is_blank(r.author_name)) bad("missing author_name");
        }
    }

    ImportReport report;
    report.records = records.size();
    std::unordered_map<std::string, PostId> post_of;
    std::unordered_map<std::string, ParticipantId> author_of;
    {
        std::shared_lock plock(participants_mutex_);
        for (const auto& [id, p] : participants_) author_of.emplace(p.name, id);
    }
    std::vector<ParticipantId> imported_authors;
    std::vector<PendingEvent> events;
    const FacilitatorState saved_state = e.state;
    const auto saved_points = point_ledger();

    const bool one_transaction = clock == ReplayClock::Instantaneous;
    std::optional<Store::Transaction> tx;
    if (one_transaction) tx.emplace(store_);

    try {
        for (std::size_t i = 0; i < records.size(); ++i) {
            const TranscriptRecord& r = records[i];
            Timestamp at = r.timestamp;
            if (clock == ReplayClock::RealTime) {
                if (i > 0) std::this_thread::sleep_for(r.timestamp - records[i - 1].timestamp);
                at = e.next_post_time(options_.clock());
            }

            std::optional<PostId> parent;
            if (r.parent_record_id) {
                auto it = post_of.find(*r.parent_record_id);
                if (it != post_of.end()) parent = it->second;
            }

            if (r.is_agent) {
                Post post;
                post.post_id = post_ids_.next();
                post.theme_id = theme;
                post.author_id = kFacilitatorId;
                post.parent_post_id = parent;
                post.text = r.text;
                post.created_at = at;
                post.is_agent = true;
                std::optional<NodeId> target;
                if (parent) {
                    auto nodes = e.tree.nodes_of_post(*parent);
                    if (!nodes.empty()) target = nodes.back();
                }
                FacilitatorState next = e.state;
                next.last_agent_post_at = at;
                if (target) next.addressed_nodes.insert(*target);
                auto result = ingest_agent(e, post, target, next, events);
                post_of.emplace(r.record_id, post.post_id);
                ++report.agent_records;
                ++report.accepted;
                if (result.attached) ++report.nodes_attached;
                continue;
            }

            try {
                if (r.parent_record_id && !parent) {
                    throw Error(ErrorCode::UnknownParentPost, "parent record " + *r.parent_record_id + " was not accepted");
                }
                auto author = author_of.find(r.author_name);
                if (author == author_of.end()) {
                    Registration reg;
                    reg.name = r.author_name;
                    reg.email = "import-" + std::to_string(participant_ids_.peek()) + "@transcript.invalid";
                    reg.consent = true;
                    std::optional<Store::Transaction> reg_tx;
                    if (!one_transaction) reg_tx.emplace(store_);
                    ParticipantProfile p = register_locked(reg);
                    if (reg_tx) reg_tx->commit();
                    author = author_of.emplace(r.author_name, p.participant_id).first;
                    imported_authors.push_back(p.participant_id);
                    std::unique_lock plock(participants_mutex_);
                    by_email_.emplace(email_key(p.email), p.participant_id);
                    participants_.emplace(p.participant_id, std::move(p));
                }
                check_submission(author->second, r.text, r.satisfaction);

                Post post;
                post.post_id = post_ids_.next();
                post.theme_id = theme;
                post.author_id = author->second;
                post.parent_post_id = parent;
                post.text = r.text;
                post.satisfaction = r.satisfaction;
                post.created_at = at;
                ExtractionOptions options;
                options.gold_label = r.label;
                SubmitResult result = ingest(e, post, options, events);
                post_of.emplace(r.record_id, post.post_id);
                ++report.accepted;
                report.nodes_attached += result.extraction.attached.size();
                report.unlinked += result.extraction.unlinked.size();
            } catch (const Error& err) {
                if (err.code() == ErrorCode::StorageFailure) throw;
                ++report.rejected;
                report.rejections.push_back({r.record_id, err.code(), err.what()});
            }
            if (!one_transaction) publish(e, events, false);
        }
        if (tx) tx->commit();
    } catch (...) {
        if (one_transaction) {
            // Everything in the store is rolled back; mirror that in memory.
            tx.reset();
            e.tree.truncate(1);
            e.posts.clear();
            e.post_index.clear();
            e.state = saved_state;
            {
                std::lock_guard plock(points_mutex_);
                points_ = saved_points;
            }
            std::unique_lock parts(participants_mutex_);
            for (ParticipantId id : imported_authors) {
                auto it = participants_.find(id);
                if (it == participants_.end()) continue;
                by_email_.erase(email_key(it->second.email));
                participants_.erase(it);
            }
        }
        throw;
    }
    tx.reset();
    publish(e, events, true);
    return report;
}

// ---- reads -----------------------------------------------------------------

std::vector<Post> ForumService::posts(ThemeId theme) const
{
    ThemeEntry& e = entry(theme);
    std::shared_lock lock(e.mutex);
    return e.posts;
}

nlohmann::json ForumService::posts_json(ThemeId theme) const
{
    ThemeEntry& e = entry(theme);
    std::shared_lock lock(e.mutex);
    nlohmann::json out = nlohmann::json::array();
    for (const Post& p : e.posts) {
        out.push_back(post_to_json(p, name_of(p.author_id, e.theme), e.theme.policy.disclose_identity));
    }
    return out;
}

nlohmann::json ForumService::get_tree(ThemeId theme) const
{
    ThemeEntry& e = entry(theme);
    std::shared_lock lock(e.mutex);
    return serialize_tree(e.tree);
}

std::string ForumService::get_summary(ThemeId theme) const
{
    ThemeEntry& e = entry(theme);
    std::shared_lock lock(e.mutex);
    return render_outline(e.tree, [&](ParticipantId id) { return name_of(id, e.theme); });
}

DiscussionStats ForumService::stats_locked(const ThemeEntry& e) const
{
    DiscussionStats s = count_elements(e.tree);
    s.agent_posts = static_cast<std::size_t>(std::count_if(e.posts.begin(), e.posts.end(), [](const Post& p) { return p.is_agent; }));
    s.participant_posts = e.posts.size() - s.agent_posts;
    return s;
}

DiscussionStats ForumService::get_stats(ThemeId theme) const
{
    ThemeEntry& e = entry(theme);
    std::shared_lock lock(e.mutex);
    return stats_locked(e);
}

FacilitatorState ForumService::facilitator_state(ThemeId theme) const
{
    ThemeEntry& e = entry(theme);
    std::shared_lock lock(e.mutex);
    return e.state;
}

ThemeSnapshot ForumService::snapshot(ThemeId theme) const
{
    ThemeEntry& e = entry(theme);
    std::shared_lock lock(e.mutex);
    return ThemeSnapshot{e.theme, e.tree, e.posts};
}

std::string render_outline(const DiscussionTree& tree, const std::function<std::string(ParticipantId)>& author_name)
{
    std::string out;
    std::vector<std::pair<NodeId, std::size_t>> stack{{tree.root_id(), 0}};
    while (!stack.empty()) {
        auto [id, depth] = stack.back();
        stack.pop_back();
        const IbisNode& n = tree.node(id);
        std::string label(to_string(n.node_type));
        std::transform(label.begin(), label.end(), label.begin(), [](char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); });
        std::string line_text = n.text;
        std::replace_if(line_text.begin(), line_text.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
        out.append(2 * depth, ' ');
        out += "[" + label + "] " + line_text + " (" + author_name(n.author_id) + ")\n";

        std::vector<NodeId> children = tree.children_of(id);
        std::stable_sort(children.begin(), children.end(),
                         [&](NodeId a, NodeId b) { return tree.node(a).created_at < tree.node(b).created_at; });
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.emplace_back(*it, depth + 1);
    }
    return out;
}

}  // namespace ibis
