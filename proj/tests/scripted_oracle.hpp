#pragma once
// Expected tree for tests/data/scripted_20.jsonl, traced by hand through the
// rule table and the parent-candidate rule. Each sentence is identified by
// (record id, text); the parent is another sentence, the theme root ("root")
// or nothing at all ("unlinked").

#include "ibis/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace ibis::testing {

struct OracleSentence {
    std::string record;
    std::string text;
    NodeType type;
    double confidence;
    std::string parent_record;  // "root", "unlinked" or a record id
    std::string parent_text;
};

inline const std::vector<OracleSentence>& scripted_oracle()
{
    using enum NodeType;
    static const std::vector<OracleSentence> oracle{
        {"p1", "We should build more schools in rural districts.", Idea, 1.0, "root", ""},
        {"p2", "I agree, this is a good idea for girls.", Pros, 1.0, "p1",
         "We should build more schools in rural districts."},
        {"p3", "However, teachers are hard to find in remote areas.", Cons, 1.0, "p1",
         "We should build more schools in rural districts."},
        {"p4", "How can we train more local teachers?", Issue, 1.0, "p3",
         "However, teachers are hard to find in remote areas."},
        {"p5", "Let's open a teacher college in each province.", Idea, 1.0, "p4",
         "How can we train more local teachers?"},
        {"p6", "Roads are bad.", Idea, 0.5, "root", ""},
        {"p6", "We should fix them.", Idea, 1.0, "root", ""},
        {"p7", "That is a big risk for the budget.", Cons, 1.0, "p6", "We should fix them."},
        {"p8", "Is it possible to get funding from donors?", Issue, 1.0, "p7", "That is a big risk for the budget."},
        {"p9", "Should we prioritize education?", Issue, 1.0, "unlinked", ""},
        {"p9", "We should fund schools.", Idea, 1.0, "root", ""},
        {"p10", "This is an effective plan.", Pros, 1.0, "p9", "We should fund schools."},
        {"p11", "What about the cost of maintenance?", Issue, 1.0, "p10", "This is an effective plan."},
        {"p12", "Public transport is a problem in Kabul.", Idea, 0.5, "root", ""},
        {"p13", "But buses are too expensive for families.", Cons, 1.0, "p12", "Public transport is a problem in Kabul."},
        {"p14", "I support this because it helps workers.", Pros, 1.0, "p12", "Public transport is a problem in Kabul."},
        {"p15", "We could add subsidies for students.", Idea, 1.0, "root", ""},
        {"p16", "Why do girls leave school early?", Issue, 1.0, "p2", "I agree, this is a good idea for girls."},
        {"p17", "Parents need to see the value of education.", Idea, 1.0, "p16", "Why do girls leave school early?"},
        {"p17", "Families are poor.", Idea, 0.5, "p16", "Why do girls leave school early?"},
        {"p18", "Good idea, scholarships would also help.", Pros, 1.0, "p17", "Families are poor."},
        {"p19", "We should hire local guards.", Idea, 1.0, "p11", "What about the cost of maintenance?"},
        {"p19", "I like this approach.", Pros, 1.0, "p19", "We should hire local guards."},
        {"p20", "The weather was pleasant", Idea, 0.5, "root", ""},
    };
    return oracle;
}

// Hand counts over the linked sentences above.
inline constexpr std::size_t kScriptedIssues = 4;
inline constexpr std::size_t kScriptedIdeas = 11;
inline constexpr std::size_t kScriptedPros = 5;
inline constexpr std::size_t kScriptedCons = 3;
inline constexpr std::size_t kScriptedUnlinked = 1;

/// Compares a produced tree with the oracle. `post_of` maps record ids to
/// the post ids they were stored under; `unlinked` lists nodes that were
/// left out of the tree. Returns one line per mismatch.
inline std::vector<std::string> diff_against_oracle(const DiscussionTree& tree,
                                                    const std::map<std::string, PostId>& post_of,
                                                    const std::vector<IbisNode>& unlinked)
{
    std::vector<std::string> problems;
    auto find_in_tree = [&](const std::string& record, const std::string& text) -> const IbisNode* {
        auto it = post_of.find(record);
        if (it == post_of.end()) return nullptr;
        for (NodeId id : tree.nodes_of_post(it->second)) {
            if (tree.node(id).text == text) return &tree.node(id);
        }
        return nullptr;
    };

    std::size_t linked = 0;
    for (const OracleSentence& o : scripted_oracle()) {
        const std::string where = o.record + " \"" + o.text + "\"";
        const IbisNode* node = find_in_tree(o.record, o.text);
        if (o.parent_record == "unlinked") {
            if (node != nullptr) problems.push_back(where + ": expected unlinked but found in tree");
            bool reported = false;
            for (const IbisNode& u : unlinked) reported = reported || (u.text == o.text && u.node_type == o.type);
            if (!reported) problems.push_back(where + ": not reported as unlinked");
            continue;
        }
        ++linked;
        if (node == nullptr) {
            problems.push_back(where + ": missing from tree");
            continue;
        }
        if (node->node_type != o.type) problems.push_back(where + ": wrong type " + std::string(to_string(node->node_type)));
        if (node->confidence != o.confidence) problems.push_back(where + ": wrong confidence");
        auto parent = tree.parent_of(node->node_id);
        if (!parent) {
            problems.push_back(where + ": has no parent");
            continue;
        }
        if (o.parent_record == "root") {
            if (*parent != tree.root_id()) problems.push_back(where + ": parent should be the root");
        } else {
            const IbisNode* expected = find_in_tree(o.parent_record, o.parent_text);
            if (expected == nullptr || expected->node_id != *parent) {
                problems.push_back(where + ": wrong parent " + tree.node(*parent).text);
            }
        }
    }
    if (tree.size() != linked + 1) {
        problems.push_back("tree has " + std::to_string(tree.size()) + " nodes, expected " + std::to_string(linked + 1));
    }
    return problems;
}

}  // namespace ibis::testing
