#pragma once
// IBIS domain types: node and link kinds, the discussion tree and element
// counting.

#include "ibis/ids.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ibis {

enum class NodeType { Issue, Idea, Pros, Cons };

inline constexpr std::array<NodeType, 4> kAllNodeTypes{
    NodeType::Issue, NodeType::Idea, NodeType::Pros, NodeType::Cons};

std::string_view to_string(NodeType type) noexcept;
std::optional<NodeType> parse_node_type(std::string_view text) noexcept;

/// Directed child -> parent link kinds. These six are the only legal links.
enum class LinkType { IdeaToIssue, ProsToIdea, ConsToIdea, IssueToIdea, IssueToPros, IssueToCons };

inline constexpr std::array<LinkType, 6> kAllLinkTypes{
    LinkType::IdeaToIssue, LinkType::ProsToIdea,  LinkType::ConsToIdea,
    LinkType::IssueToIdea, LinkType::IssueToPros, LinkType::IssueToCons};

std::string_view to_string(LinkType type) noexcept;
std::optional<LinkType> parse_link_type(std::string_view text) noexcept;

std::optional<LinkType> link_type_for(NodeType child, NodeType parent) noexcept;
bool allowed_link(NodeType child, NodeType parent) noexcept;
NodeType child_type_of(LinkType type) noexcept;
NodeType parent_type_of(LinkType type) noexcept;

/// Source post id carried by the theme's root node, which has no post.
inline constexpr PostId kThemePostId{0};

struct IbisNode {
    NodeId node_id;
    NodeType node_type = NodeType::Idea;
    std::string text;
    ParticipantId author_id;
    PostId source_post_id;
    bool is_agent = false;
    double confidence = 1.0;
    Timestamp created_at{};

    friend bool operator==(const IbisNode&, const IbisNode&) = default;
};

struct IbisLink {
    NodeId child_id;
    NodeId parent_id;
    LinkType link_type = LinkType::IdeaToIssue;

    friend bool operator==(const IbisLink&, const IbisLink&) = default;
};

/// Throws Error(InvalidNode) if text is blank, confidence is outside [0,1]
/// or the agent flag disagrees with the author identity.
void validate_node(const IbisNode& node);

/// Theme-rooted IBIS tree. Nodes are kept in attachment order, which is also
/// the recency order used by link prediction and target selection.
class DiscussionTree {
public:
    /// The root represents the theme and must be an Issue.
    DiscussionTree(ThemeId theme_id, IbisNode root);

    ThemeId theme_id() const noexcept { return theme_id_; }
    const IbisNode& root() const noexcept { return nodes_.front(); }
    NodeId root_id() const noexcept { return nodes_.front().node_id; }

    /// Adds `node` under `parent_id` and returns the new link. Strong
    /// guarantee: on error the tree is unchanged.
    /// Errors: UnknownParent, IllegalLink, DuplicateNode, InvalidNode.
    const IbisLink& attach(IbisNode node, NodeId parent_id);

    bool contains(NodeId id) const noexcept { return index_.contains(id); }
    const IbisNode* find(NodeId id) const noexcept;
    const IbisNode& node(NodeId id) const;
    std::optional<NodeId> parent_of(NodeId id) const;
    std::vector<NodeId> children_of(NodeId id) const;

    /// All nodes, root first, in attachment order.
    std::span<const IbisNode> nodes() const noexcept { return nodes_; }
    /// One link per non-root node, in attachment order.
    std::span<const IbisLink> links() const noexcept { return links_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    /// Linked nodes extracted from `post`, in attachment order.
    std::vector<NodeId> nodes_of_post(PostId post) const;
    /// Most recently attached node of `type`, root included.
    const IbisNode* latest_of_type(NodeType type) const noexcept;

    /// Smallest id strictly greater than every node id in the tree.
    NodeId next_free_id() const noexcept;

    /// Drops every node attached after the first `size` nodes, newest first.
    /// Used to undo a partially applied post. The root is always kept.
    void truncate(std::size_t size);

    friend bool operator==(const DiscussionTree& a, const DiscussionTree& b);

private:
    ThemeId theme_id_;
    std::vector<IbisNode> nodes_;
    std::vector<IbisLink> links_;
    std::unordered_map<NodeId, std::size_t> index_;
    std::unordered_map<NodeId, std::vector<NodeId>> children_;
    std::unordered_map<PostId, std::vector<NodeId>> by_post_;
    std::uint64_t max_id_ = 0;
};

struct DiscussionStats {
    std::size_t issues = 0;
    std::size_t ideas = 0;
    std::size_t pros = 0;
    std::size_t cons = 0;
    std::size_t total = 0;
    std::size_t agent_posts = 0;
    std::size_t participant_posts = 0;

    std::size_t count(NodeType type) const noexcept;
    void add(NodeType type) noexcept;

    friend bool operator==(const DiscussionStats&, const DiscussionStats&) = default;
};

/// Per-type counts over non-root participant nodes. Agent nodes are left out
/// of the IBIS counts; agent_posts and participant_posts count distinct
/// source posts.
DiscussionStats count_elements(const DiscussionTree& tree);

/// Same counts restricted to nodes accepted by `keep`.
DiscussionStats count_elements(const DiscussionTree& tree, const std::function<bool(const IbisNode&)>& keep);

}  // namespace ibis
