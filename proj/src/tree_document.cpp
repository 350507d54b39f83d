#include "ibis/tree_document.hpp"

#include "ibis/error.hpp"

#include <algorithm>
#include <tuple>

namespace ibis {

using nlohmann::json;

json node_to_json(const IbisNode& node)
{
    return json{
        {"node_id", node.node_id.value},
        {"type", to_string(node.node_type)},
        {"text", node.text},
        {"author_id", node.author_id.value},
        {"is_agent", node.is_agent},
        {"confidence", node.confidence},
        {"source_post_id", node.source_post_id.value},
        {"created_at", to_epoch_ms(node.created_at)},
    };
}

IbisNode node_from_json(const json& j)
{
    try {
        IbisNode n;
        n.node_id = NodeId{j.at("node_id").get<std::uint64_t>()};
        auto type = parse_node_type(j.at("type").get<std::string>());
        if (!type) throw Error(ErrorCode::MalformedDocument, "unknown node type " + j.at("type").dump());
        n.node_type = *type;
        n.text = j.at("text").get<std::string>();
        n.author_id = ParticipantId{j.at("author_id").get<std::uint64_t>()};
        n.is_agent = j.at("is_agent").get<bool>();
        n.confidence = j.at("confidence").get<double>();
        n.source_post_id = PostId{j.at("source_post_id").get<std::uint64_t>()};
        n.created_at = from_epoch_ms(j.at("created_at").get<std::int64_t>());
        return n;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("bad node record: ") + e.what());
    }
}

json link_to_json(const IbisLink& l)
{
    return json{
        {"child_id", l.child_id.value},
        {"parent_id", l.parent_id.value},
        {"link_type", to_string(l.link_type)},
    };
}

json serialize_tree(const DiscussionTree& tree)
{
    std::vector<const IbisNode*> nodes;
    nodes.reserve(tree.size());
    for (const IbisNode& n : tree.nodes()) nodes.push_back(&n);
    std::sort(nodes.begin(), nodes.end(), [](const IbisNode* a, const IbisNode* b) {
        return std::tie(a->created_at, a->node_id) < std::tie(b->created_at, b->node_id);
    });

    std::vector<IbisLink> links(tree.links().begin(), tree.links().end());
    std::sort(links.begin(), links.end(),
              [](const IbisLink& a, const IbisLink& b) { return a.child_id < b.child_id; });

    json doc;
    doc["theme_id"] = tree.theme_id().value;
    doc["root_id"] = tree.root_id().value;
    json& node_array = doc["nodes"] = json::array();
    for (const IbisNode* n : nodes) node_array.push_back(node_to_json(*n));
    json& link_array = doc["links"] = json::array();
    for (const IbisLink& l : links) link_array.push_back(link_to_json(l));
    return doc;
}

std::string serialize_tree_string(const DiscussionTree& tree) { return serialize_tree(tree).dump(); }

DiscussionTree deserialize_tree(const json& doc)
{
    try {
        const ThemeId theme{doc.at("theme_id").get<std::uint64_t>()};
        const NodeId root_id{doc.at("root_id").get<std::uint64_t>()};

        std::unordered_map<NodeId, IbisNode> pending;
        std::vector<NodeId> order;
        for (const json& jn : doc.at("nodes")) {
            IbisNode n = node_from_json(jn);
            order.push_back(n.node_id);
            if (!pending.emplace(n.node_id, std::move(n)).second) {
                throw Error(ErrorCode::DuplicateNode, "node listed twice in document");
            }
        }
        auto root_it = pending.find(root_id);
        if (root_it == pending.end()) throw Error(ErrorCode::MalformedDocument, "root node missing");

        std::unordered_map<NodeId, std::pair<NodeId, LinkType>> parent_of;
        for (const json& jl : doc.at("links")) {
            NodeId child{jl.at("child_id").get<std::uint64_t>()};
            NodeId parent{jl.at("parent_id").get<std::uint64_t>()};
            auto type = parse_link_type(jl.at("link_type").get<std::string>());
            if (!type) throw Error(ErrorCode::MalformedDocument, "unknown link type " + jl.at("link_type").dump());
            if (child == parent) throw Error(ErrorCode::IllegalLink, "self link");
            if (!parent_of.emplace(child, std::make_pair(parent, *type)).second) {
                throw Error(ErrorCode::MalformedDocument, "node has more than one parent link");
            }
        }
        if (parent_of.size() + 1 != pending.size() || parent_of.contains(root_id)) {
            throw Error(ErrorCode::MalformedDocument, "link count does not match a tree over the nodes");
        }

        DiscussionTree tree(theme, root_it->second);
        pending.erase(root_it);

        // Attach in document order, deferring nodes whose parent is not yet
        // present. A full pass without progress means a cycle or dangling link.
        std::vector<NodeId> todo;
        for (NodeId id : order) {
            if (id != root_id) todo.push_back(id);
        }
        while (!todo.empty()) {
            std::vector<NodeId> deferred;
            for (NodeId id : todo) {
                auto link = parent_of.find(id);
                if (link == parent_of.end()) throw Error(ErrorCode::MalformedDocument, "node without parent link");
                if (!tree.contains(link->second.first)) {
                    deferred.push_back(id);
                    continue;
                }
                const IbisLink& made = tree.attach(pending.at(id), link->second.first);
                if (made.link_type != link->second.second) {
                    throw Error(ErrorCode::IllegalLink, "link type disagrees with node types");
                }
            }
            if (deferred.size() == todo.size()) {
                throw Error(ErrorCode::MalformedDocument, "links do not form a tree rooted at root_id");
            }
            todo = std::move(deferred);
        }
        return tree;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("bad tree document: ") + e.what());
    }
}

}  // namespace ibis
