#pragma once
// Turning posts into IBIS nodes: sentence segmentation, node classification
// behind a pluggable interface, parent (link) prediction and the per-post
// extraction pipeline.

#include "ibis/dataset.hpp"
#include "ibis/model.hpp"
#include "ibis/post.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ibis {

struct Sentence {
    std::string text;
    std::size_t index_in_post = 0;

    friend bool operator==(const Sentence&, const Sentence&) = default;
};

/// Splits on '.', '?' or '!' followed by whitespace or end of text. The
/// punctuation stays with its sentence; fragments are trimmed and blank ones
/// dropped. Errors: EmptyInput for blank text.
std::vector<Sentence> segment_text(std::string_view text);

struct Classification {
    NodeType node_type = NodeType::Idea;
    double confidence = 0.0;

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// The deterministic rule table. Matching is case-insensitive on whole words,
/// first hit wins:
///   Issue  ends with '?' or opens with a question word / "should we" ...
///   Cons   contradiction markers, only under an Idea parent
///   Pros   approval markers, only under an Idea parent
///   Idea   proposal markers
///   Idea   fallback at confidence 0.5 (rule hits score 1.0)
Classification classify_builtin(std::string_view sentence, std::optional<NodeType> parent_type);

class Classifier {
public:
    virtual ~Classifier() = default;

    virtual Classification classify(const Sentence& sentence, std::optional<NodeType> parent_type) = 0;

    /// Called with each cross-validation training split before the matching
    /// held-out fold is classified. Untrained classifiers ignore it.
    virtual void train(std::span<const LabeledItem> /*training*/) {}

    virtual std::string name() const = 0;
};

class RuleClassifier final : public Classifier {
public:
    Classification classify(const Sentence& sentence, std::optional<NodeType> parent_type) override
    {
        return classify_builtin(sentence.text, parent_type);
    }
    std::string name() const override { return "builtin"; }
};

/// Which classifier a service or evaluation run uses: the rule table, or an
/// external HTTP endpoint given as "http://host[:port][/path]".
struct ClassifierRef {
    enum class Kind { Builtin, External };

    Kind kind = Kind::Builtin;
    std::string host;
    int port = 80;
    std::string path = "/classify";

    static ClassifierRef builtin() { return {}; }
    /// Accepts "builtin" or an http URL. Errors: InvalidClassifier.
    static ClassifierRef parse(std::string_view spec);

    std::string to_string() const;
};

inline constexpr std::chrono::milliseconds kDefaultClassifierTimeout{2000};

std::unique_ptr<Classifier> make_classifier(const ClassifierRef& ref,
                                            std::chrono::milliseconds timeout = kDefaultClassifierTimeout);

/// Picks the parent for `node` among linked tree nodes, or nullopt when no
/// type-legal parent exists (the node is then left unlinked).
///
/// Candidates are the nodes of the replied-to post when one is given,
/// otherwise the theme root plus earlier sentences of the node's own post.
/// The most recent legal candidate wins. Failing that: the root if legal,
/// else for Pros/Cons the most recent Idea anywhere in the tree.
std::optional<NodeId> predict_parent(const IbisNode& node, std::optional<PostId> reply_target_post,
                                     const DiscussionTree& tree);

struct AttachedNode {
    IbisNode node;
    IbisLink link;
};

struct ExtractionResult {
    std::vector<AttachedNode> attached;
    std::vector<IbisNode> unlinked;
    std::vector<std::string> warnings;
    bool used_fallback = false;
};

struct ExtractionOptions {
    /// Known label for the whole post (transcript fixtures). When set the
    /// post becomes a single node of this type and the classifier is skipped.
    std::optional<NodeType> gold_label;
};

/// segment -> classify -> predict_parent -> attach, in sentence order.
/// Sentence 0 is classified with the replied-to node's type as context
/// (the root for replies to the theme); later sentences use sentence 0's
/// type. If the classifier reports ExternalUnavailable the rule table is
/// used instead and the fallback is recorded.
ExtractionResult extract_post(const Post& post, DiscussionTree& tree, Classifier& classifier,
                              IdSequence<NodeId>& node_ids, const ExtractionOptions& options = {});

/// Attaches a facilitation message as an Issue node. It goes under `target`
/// when that is legal (Idea/Pros/Cons targets) and under the target's parent
/// otherwise. Returns nullopt (nothing attached) if neither is legal.
std::optional<AttachedNode> attach_agent_post(const Post& post, NodeId target, DiscussionTree& tree,
                                              IdSequence<NodeId>& node_ids);

}  // namespace ibis
