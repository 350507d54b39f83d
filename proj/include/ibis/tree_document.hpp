#pragma once
// Canonical JSON document for a discussion tree:
//   { theme_id, root_id,
//     nodes: [{node_id, type, text, author_id, is_agent, confidence,
//              source_post_id, created_at}],
//     links: [{child_id, parent_id, link_type}] }
// created_at is epoch milliseconds. Nodes are ordered by (created_at,
// node_id) and links by child_id, so equal trees give identical bytes.

#include "ibis/model.hpp"

#include <json.hpp>

#include <string>

namespace ibis {

nlohmann::json node_to_json(const IbisNode& node);
IbisNode node_from_json(const nlohmann::json& j);
nlohmann::json link_to_json(const IbisLink& link);

nlohmann::json serialize_tree(const DiscussionTree& tree);
std::string serialize_tree_string(const DiscussionTree& tree);

/// Rebuilds a tree from its canonical document. Every link is re-checked
/// through DiscussionTree::attach. Errors: MalformedDocument plus anything
/// attach raises.
DiscussionTree deserialize_tree(const nlohmann::json& doc);

}  // namespace ibis
