#include "ibis/facilitator.hpp"

#include "ibis/error.hpp"
#include "ibis/text.hpp"

#include <array>
#include <fstream>

namespace ibis {

void FacilitatorPolicy::validate() const
{
    if (threshold < 1) throw Error(ErrorCode::InvalidPolicy, "threshold must be at least 1");
    if (period < std::chrono::seconds{1}) throw Error(ErrorCode::InvalidPolicy, "period must be at least 1 s");
}

nlohmann::json policy_to_json(const FacilitatorPolicy& p)
{
    return {
        {"enabled", p.enabled},
        {"threshold", p.threshold},
        {"period_seconds", p.period.count()},
        {"identity_name", p.identity_name},
        {"disclose_identity", p.disclose_identity},
    };
}

FacilitatorPolicy policy_from_json(const nlohmann::json& j, const FacilitatorPolicy& base)
{
    if (!j.is_object()) throw Error(ErrorCode::InvalidPolicy, "policy must be an object");
    FacilitatorPolicy p = base;
    try {
        if (j.contains("enabled")) p.enabled = j.at("enabled").get<bool>();
        if (j.contains("threshold")) p.threshold = j.at("threshold").get<int>();
        if (j.contains("period_seconds")) p.period = std::chrono::seconds{j.at("period_seconds").get<std::int64_t>()};
        if (j.contains("identity_name")) p.identity_name = j.at("identity_name").get<std::string>();
        if (j.contains("disclose_identity")) p.disclose_identity = j.at("disclose_identity").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidPolicy, std::string("bad policy field: ") + e.what());
    }
    p.validate();
    return p;
}

nlohmann::json state_to_json(const FacilitatorState& s)
{
    nlohmann::json addressed = nlohmann::json::array();
    for (NodeId id : s.addressed_nodes) addressed.push_back(id.value);
    nlohmann::json j{{"posts_since_last_agent", s.posts_since_last_agent}, {"addressed_nodes", addressed}};
    j["last_agent_post_at"] =
        s.last_agent_post_at ? nlohmann::json(to_epoch_ms(*s.last_agent_post_at)) : nlohmann::json(nullptr);
    return j;
}

FacilitatorState state_from_json(const nlohmann::json& j)
{
    FacilitatorState s;
    s.posts_since_last_agent = j.value("posts_since_last_agent", 0);
    if (j.contains("last_agent_post_at") && !j["last_agent_post_at"].is_null()) {
        s.last_agent_post_at = from_epoch_ms(j["last_agent_post_at"].get<std::int64_t>());
    }
    if (j.contains("addressed_nodes")) {
        for (const auto& id : j["addressed_nodes"]) s.addressed_nodes.insert(NodeId{id.get<std::uint64_t>()});
    }
    return s;
}

namespace {

constexpr std::string_view kNamePlaceholder = "{name}";
constexpr std::string_view kElementPlaceholder = "{element}";

std::size_t occurrences(std::string_view haystack, std::string_view needle)
{
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

MessageTemplate::MessageTemplate(NodeType target_type, std::string pattern)
    : target_type_(target_type), pattern_(std::move(pattern))
{
    if (occurrences(pattern_, kNamePlaceholder) != 1 || occurrences(pattern_, kElementPlaceholder) != 1) {
        throw Error(ErrorCode::InvalidTemplate, "template must contain {name} and {element} exactly once: " + pattern_);
    }
}

TemplateSet::TemplateSet()
{
    set(MessageTemplate(NodeType::Issue,
                        "Please feel free to provide anything that comes to your mind about {name}'s {element}."));
    set(MessageTemplate(NodeType::Idea, "What do you think are the merits or demerits of {name}'s {element}?"));
    set(MessageTemplate(NodeType::Pros,
                        "Please feel free to add other advantages you see in {name}'s {element}."));
    set(MessageTemplate(NodeType::Cons,
                        "How could we overcome the concern raised in {name}'s {element}?"));
}

void TemplateSet::set(MessageTemplate tmpl)
{
    templates_.insert_or_assign(tmpl.target_type(), std::move(tmpl));
}

TemplateSet TemplateSet::from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw Error(ErrorCode::InvalidTemplate, "templates must be a JSON object keyed by node type");
    TemplateSet set;
    for (const auto& [key, value] : j.items()) {
        auto type = parse_node_type(key);
        if (!type) throw Error(ErrorCode::InvalidTemplate, "unknown node type " + key);
        if (!value.is_string()) throw Error(ErrorCode::InvalidTemplate, "template for " + key + " must be a string");
        set.set(MessageTemplate(*type, value.get<std::string>()));
    }
    return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidTemplate, "cannot open " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidTemplate, path.string() + ": " + e.what());
    }
}

std::string truncate_element(std::string_view s)
{
    if (text::utf8_length(s) <= kMaxElementLength) return std::string(s);

    constexpr std::string_view ellipsis = "\xE2\x80\xA6";  // U+2026
    const std::size_t cut = text::utf8_offset(s, kMaxElementLength - 1);
    std::string_view head = s.substr(0, cut);
    if (!text::is_space(s[cut])) {
        // Mid-word: drop the partial word when an earlier boundary exists.
        auto space = head.find_last_of(" \t\n\r");
        if (space != std::string_view::npos && space > 0) head = head.substr(0, space);
    }
    head = text::trim(head);
    while (!head.empty() && (head.back() == ',' || head.back() == ';' || head.back() == ':')) {
        head.remove_suffix(1);
    }
    return std::string(head) + std::string(ellipsis);
}

std::string render_message(const MessageTemplate& tmpl, const IbisNode& target, std::string_view author_name)
{
    if (tmpl.target_type() != target.node_type) {
        throw Error(ErrorCode::TypeMismatch, "template for " + std::string(to_string(tmpl.target_type())) +
                                                 " used on a " + std::string(to_string(target.node_type)) + " node");
    }
    std::string_view quoted = text::trim(target.text);
    while (!quoted.empty() && (quoted.back() == '.' || quoted.back() == '!' || quoted.back() == '?')) {
        quoted.remove_suffix(1);
    }
    const std::string element = truncate_element(text::trim(quoted));
    const std::string_view pattern = tmpl.pattern();
    const auto name_at = pattern.find(kNamePlaceholder);
    const auto element_at = pattern.find(kElementPlaceholder);

    // Splice both placeholders in one pass so substituted text is never rescanned.
    std::string out;
    out.reserve(pattern.size() + author_name.size() + element.size());
    auto splice = [&](std::size_t from, std::size_t at, std::string_view placeholder, std::string_view value) {
        out.append(pattern.substr(from, at - from));
        out.append(value);
        return at + placeholder.size();
    };
    std::size_t pos = 0;
    if (name_at < element_at) {
        pos = splice(pos, name_at, kNamePlaceholder, author_name);
        pos = splice(pos, element_at, kElementPlaceholder, element);
    } else {
        pos = splice(pos, element_at, kElementPlaceholder, element);
        pos = splice(pos, name_at, kNamePlaceholder, author_name);
    }
    out.append(pattern.substr(pos));
    return out;
}

void record_post(FacilitatorState& state, const Post& post)
{
    if (!post.is_agent && post.author_id != kFacilitatorId) ++state.posts_since_last_agent;
}

namespace {

int preference_rank(NodeType t)
{
    switch (t) {
        case NodeType::Issue: return 0;
        case NodeType::Idea: return 1;
        case NodeType::Cons: return 2;
        case NodeType::Pros: return 3;
    }
    return 4;
}

}  // namespace

const IbisNode* select_target(const DiscussionTree& tree, const FacilitatorState& state)
{
    std::array<const IbisNode*, 4> fresh_by_rank{};
    const IbisNode* latest_any = nullptr;

    const auto nodes = tree.nodes();
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
        const IbisNode& n = *it;
        if (n.node_id == tree.root_id() || n.is_agent || state.addressed_nodes.contains(n.node_id)) continue;
        if (latest_any == nullptr) latest_any = &n;
        const bool fresh = !state.last_agent_post_at || n.created_at > *state.last_agent_post_at;
        if (!fresh) continue;
        auto& slot = fresh_by_rank[static_cast<std::size_t>(preference_rank(n.node_type))];
        if (slot == nullptr) slot = &n;
    }
    for (const IbisNode* n : fresh_by_rank) {
        if (n != nullptr) return n;
    }
    return latest_any;
}

std::optional<Facilitation> tick(FacilitatorState& state, const FacilitatorPolicy& policy,
                                 const DiscussionTree& tree, Timestamp now, const TemplateSet& templates,
                                 const NameLookup& author_name)
{
    if (!policy.enabled || state.posts_since_last_agent < policy.threshold) return std::nullopt;
    const IbisNode* target = select_target(tree, state);
    if (target == nullptr) return std::nullopt;

    Facilitation f;
    f.target = target->node_id;
    f.reply_to = target->source_post_id;
    f.text = render_message(templates.for_type(target->node_type), *target, author_name(target->author_id));
    f.at = now;

    state.posts_since_last_agent -= policy.threshold;
    state.addressed_nodes.insert(target->node_id);
    state.last_agent_post_at = now;
    return f;
}

}  // namespace ibis
