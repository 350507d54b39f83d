#include "ibis/model.hpp"

#include "ibis/error.hpp"
#include "ibis/text.hpp"

#include <algorithm>
#include <unordered_set>

namespace ibis {

std::string_view to_string(NodeType type) noexcept
{
    switch (type) {
        case NodeType::Issue: return "issue";
        case NodeType::Idea: return "idea";
        case NodeType::Pros: return "pros";
        case NodeType::Cons: return "cons";
    }
    return "idea";
}

std::optional<NodeType> parse_node_type(std::string_view text) noexcept
{
    for (NodeType t : kAllNodeTypes) {
        if (text::to_lower(text) == to_string(t)) return t;
    }
    return std::nullopt;
}

std::string_view to_string(LinkType type) noexcept
{
    switch (type) {
        case LinkType::IdeaToIssue: return "idea_to_issue";
        case LinkType::ProsToIdea: return "pros_to_idea";
        case LinkType::ConsToIdea: return "cons_to_idea";
        case LinkType::IssueToIdea: return "issue_to_idea";
        case LinkType::IssueToPros: return "issue_to_pros";
        case LinkType::IssueToCons: return "issue_to_cons";
    }
    return "idea_to_issue";
}

std::optional<LinkType> parse_link_type(std::string_view text) noexcept
{
    for (LinkType t : kAllLinkTypes) {
        if (text == to_string(t)) return t;
    }
    return std::nullopt;
}

std::optional<LinkType> link_type_for(NodeType child, NodeType parent) noexcept
{
    using enum NodeType;
    if (child == Idea && parent == Issue) return LinkType::IdeaToIssue;
    if (child == Pros && parent == Idea) return LinkType::ProsToIdea;
    if (child == Cons && parent == Idea) return LinkType::ConsToIdea;
    if (child == Issue && parent == Idea) return LinkType::IssueToIdea;
    if (child == Issue && parent == Pros) return LinkType::IssueToPros;
    if (child == Issue && parent == Cons) return LinkType::IssueToCons;
    return std::nullopt;
}

bool allowed_link(NodeType child, NodeType parent) noexcept
{
    return link_type_for(child, parent).has_value();
}

NodeType child_type_of(LinkType type) noexcept
{
    switch (type) {
        case LinkType::IdeaToIssue: return NodeType::Idea;
        case LinkType::ProsToIdea: return NodeType::Pros;
        case LinkType::ConsToIdea: return NodeType::Cons;
        default: return NodeType::Issue;
    }
}

NodeType parent_type_of(LinkType type) noexcept
{
    switch (type) {
        case LinkType::IdeaToIssue: return NodeType::Issue;
        case LinkType::IssueToPros: return NodeType::Pros;
        case LinkType::IssueToCons: return NodeType::Cons;
        default: return NodeType::Idea;
    }
}

void validate_node(const IbisNode& node)
{
    if (text::is_blank(node.text)) {
        throw Error(ErrorCode::InvalidNode, "node " + std::to_string(node.node_id.value) + " has empty text");
    }
    if (!(node.confidence >= 0.0 && node.confidence <= 1.0)) {
        throw Error(ErrorCode::InvalidNode,
                    "node " + std::to_string(node.node_id.value) + " confidence outside [0,1]");
    }
    if (node.is_agent != (node.author_id == kFacilitatorId)) {
        throw Error(ErrorCode::InvalidNode,
                    "node " + std::to_string(node.node_id.value) + " agent flag disagrees with author");
    }
}

DiscussionTree::DiscussionTree(ThemeId theme_id, IbisNode root) : theme_id_(theme_id)
{
    validate_node(root);
    if (root.node_type != NodeType::Issue) {
        throw Error(ErrorCode::InvalidNode, "the theme root must be an issue");
    }
    max_id_ = root.node_id.value;
    index_.emplace(root.node_id, 0);
    by_post_[root.source_post_id].push_back(root.node_id);
    nodes_.push_back(std::move(root));
}

const IbisLink& DiscussionTree::attach(IbisNode node, NodeId parent_id)
{
    validate_node(node);
    if (contains(node.node_id)) {
        throw Error(ErrorCode::DuplicateNode, "node " + std::to_string(node.node_id.value) + " already in tree");
    }
    const IbisNode* parent = find(parent_id);
    if (parent == nullptr) {
        throw Error(ErrorCode::UnknownParent, "parent " + std::to_string(parent_id.value) + " not in tree");
    }
    auto link_type = link_type_for(node.node_type, parent->node_type);
    if (!link_type) {
        throw Error(ErrorCode::IllegalLink, std::string(to_string(node.node_type)) + " cannot attach under " +
                                                std::string(to_string(parent->node_type)));
    }

    // Reserve first so that nothing below can throw after the first mutation.
    nodes_.reserve(nodes_.size() + 1);
    links_.reserve(links_.size() + 1);
    auto& siblings = children_[parent_id];
    siblings.reserve(siblings.size() + 1);
    auto& post_nodes = by_post_[node.source_post_id];
    post_nodes.reserve(post_nodes.size() + 1);
    index_.reserve(index_.size() + 1);

    const NodeId id = node.node_id;
    index_.emplace(id, nodes_.size());
    siblings.push_back(id);
    post_nodes.push_back(id);
    max_id_ = std::max(max_id_, id.value);
    nodes_.push_back(std::move(node));
    links_.push_back(IbisLink{id, parent_id, *link_type});
    return links_.back();
}

const IbisNode* DiscussionTree::find(NodeId id) const noexcept
{
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &nodes_[it->second];
}

const IbisNode& DiscussionTree::node(NodeId id) const
{
    const IbisNode* n = find(id);
    if (n == nullptr) throw Error(ErrorCode::UnknownParent, "node " + std::to_string(id.value) + " not in tree");
    return *n;
}

std::optional<NodeId> DiscussionTree::parent_of(NodeId id) const
{
    auto it = index_.find(id);
    if (it == index_.end() || it->second == 0) return std::nullopt;
    return links_[it->second - 1].parent_id;
}

std::vector<NodeId> DiscussionTree::children_of(NodeId id) const
{
    auto it = children_.find(id);
    return it == children_.end() ? std::vector<NodeId>{} : it->second;
}

std::vector<NodeId> DiscussionTree::nodes_of_post(PostId post) const
{
    auto it = by_post_.find(post);
    return it == by_post_.end() ? std::vector<NodeId>{} : it->second;
}

const IbisNode* DiscussionTree::latest_of_type(NodeType type) const noexcept
{
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        if (it->node_type == type) return &*it;
    }
    return nullptr;
}

NodeId DiscussionTree::next_free_id() const noexcept { return NodeId{max_id_ + 1}; }

void DiscussionTree::truncate(std::size_t size)
{
    size = std::max<std::size_t>(size, 1);
    while (nodes_.size() > size) {
        const IbisNode& n = nodes_.back();
        const IbisLink& l = links_.back();
        auto& siblings = children_[l.parent_id];
        siblings.pop_back();
        if (siblings.empty()) children_.erase(l.parent_id);
        auto& post_nodes = by_post_[n.source_post_id];
        post_nodes.pop_back();
        if (post_nodes.empty()) by_post_.erase(n.source_post_id);
        index_.erase(n.node_id);
        nodes_.pop_back();
        links_.pop_back();
    }
    max_id_ = 0;
    for (const IbisNode& n : nodes_) max_id_ = std::max(max_id_, n.node_id.value);
}

bool operator==(const DiscussionTree& a, const DiscussionTree& b)
{
    if (a.theme_id_ != b.theme_id_ || a.root_id() != b.root_id() || a.size() != b.size()) return false;
    for (const IbisNode& n : a.nodes_) {
        const IbisNode* other = b.find(n.node_id);
        if (other == nullptr || !(*other == n)) return false;
        if (a.parent_of(n.node_id) != b.parent_of(n.node_id)) return false;
    }
    return true;
}

std::size_t DiscussionStats::count(NodeType type) const noexcept
{
    switch (type) {
        case NodeType::Issue: return issues;
        case NodeType::Idea: return ideas;
        case NodeType::Pros: return pros;
        case NodeType::Cons: return cons;
    }
    return 0;
}

void DiscussionStats::add(NodeType type) noexcept
{
    switch (type) {
        case NodeType::Issue: ++issues; break;
        case NodeType::Idea: ++ideas; break;
        case NodeType::Pros: ++pros; break;
        case NodeType::Cons: ++cons; break;
    }
    ++total;
}

DiscussionStats count_elements(const DiscussionTree& tree)
{
    return count_elements(tree, [](const IbisNode&) { return true; });
}

DiscussionStats count_elements(const DiscussionTree& tree, const std::function<bool(const IbisNode&)>& keep)
{
    DiscussionStats stats;
    std::unordered_set<PostId> agent_posts;
    std::unordered_set<PostId> participant_posts;
    for (const IbisNode& n : tree.nodes().subspan(1)) {
        if (!keep(n)) continue;
        if (n.is_agent) {
            agent_posts.insert(n.source_post_id);
        } else {
            participant_posts.insert(n.source_post_id);
            stats.add(n.node_type);
        }
    }
    stats.agent_posts = agent_posts.size();
    stats.participant_posts = participant_posts.size();
    return stats;
}

}  // namespace ibis
