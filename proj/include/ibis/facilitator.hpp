#pragma once
// The automated facilitation agent. It counts participant posts per theme
// and, on each scheduler tick, posts at most one template-rendered prompt
// once the count reaches the policy threshold.

#include "ibis/model.hpp"
#include "ibis/post.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

namespace ibis {

struct FacilitatorPolicy {
    bool enabled = true;
    int threshold = 3;                     // participant posts per agent post
    std::chrono::seconds period{60};       // scheduler interval
    std::string identity_name = "AI Facilitator";
    bool disclose_identity = true;

    /// Errors: InvalidPolicy when threshold < 1 or period < 1 s.
    void validate() const;

    friend bool operator==(const FacilitatorPolicy&, const FacilitatorPolicy&) = default;
};

nlohmann::json policy_to_json(const FacilitatorPolicy& policy);
/// Missing fields keep `base` values. Errors: InvalidPolicy.
FacilitatorPolicy policy_from_json(const nlohmann::json& j, const FacilitatorPolicy& base = {});

struct FacilitatorState {
    int posts_since_last_agent = 0;
    std::optional<Timestamp> last_agent_post_at;
    std::set<NodeId> addressed_nodes;

    friend bool operator==(const FacilitatorState&, const FacilitatorState&) = default;
};

nlohmann::json state_to_json(const FacilitatorState& state);
FacilitatorState state_from_json(const nlohmann::json& j);

/// Message pattern for one target type; contains {name} and {element}
/// exactly once each.
class MessageTemplate {
public:
    /// Errors: InvalidTemplate.
    MessageTemplate(NodeType target_type, std::string pattern);

    NodeType target_type() const noexcept { return target_type_; }
    const std::string& pattern() const noexcept { return pattern_; }

private:
    NodeType target_type_;
    std::string pattern_;
};

class TemplateSet {
public:
    /// The built-in prompts for all four node types.
    TemplateSet();

    const MessageTemplate& for_type(NodeType type) const { return templates_.at(type); }
    void set(MessageTemplate tmpl);

    /// JSON object keyed by node type name, e.g. {"issue": "... {name} ... {element} ..."}.
    /// Types not listed keep their built-in template. Errors: InvalidTemplate.
    static TemplateSet from_json(const nlohmann::json& j);
    static TemplateSet load(const std::filesystem::path& path);

private:
    std::map<NodeType, MessageTemplate> templates_;
};

inline constexpr std::size_t kMaxElementLength = 140;

/// Shortens `text` to at most kMaxElementLength code points, cutting at a
/// word boundary and ending in an ellipsis. Short text is returned as is.
std::string truncate_element(std::string_view text);

/// The element is the target text without its closing punctuation, truncated.
/// Errors: TypeMismatch when the template is for another node type.
std::string render_message(const MessageTemplate& tmpl, const IbisNode& target, std::string_view author_name);

/// Counts participant posts; agent posts never move the counter.
void record_post(FacilitatorState& state, const Post& post);

/// Most recent unaddressed participant node, preferring Issue > Idea > Cons
/// > Pros among nodes newer than the last agent post; falls back to the most
/// recent unaddressed participant node of any type. The theme root is never
/// a target.
const IbisNode* select_target(const DiscussionTree& tree, const FacilitatorState& state);

struct Facilitation {
    NodeId target;
    PostId reply_to;  // the target's source post
    std::string text;
    Timestamp at{};
};

using NameLookup = std::function<std::string(ParticipantId)>;

/// One scheduler tick. When enabled, at or over threshold and a target
/// exists: returns the prompt, subtracts one threshold from the counter,
/// marks the target addressed and stamps last_agent_post_at. Otherwise
/// returns nullopt and leaves `state` untouched.
std::optional<Facilitation> tick(FacilitatorState& state, const FacilitatorPolicy& policy,
                                 const DiscussionTree& tree, Timestamp now, const TemplateSet& templates,
                                 const NameLookup& author_name);

}  // namespace ibis
