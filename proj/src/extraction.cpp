#include "ibis/extraction.hpp"

#include "ibis/error.hpp"
#include "ibis/text.hpp"

#include <algorithm>
#include <charconv>
#include <initializer_list>

namespace ibis {

std::vector<Sentence> segment_text(std::string_view input)
{
    if (text::is_blank(input)) throw Error(ErrorCode::EmptyInput, "cannot segment blank text");

    std::vector<Sentence> out;
    auto emit = [&](std::string_view fragment) {
        fragment = text::trim(fragment);
        if (!fragment.empty()) out.push_back(Sentence{std::string(fragment), out.size()});
    };

    std::size_t start = 0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        const char c = input[i];
        if (c != '.' && c != '?' && c != '!') continue;
        if (i + 1 == input.size() || text::is_space(input[i + 1])) {
            emit(input.substr(start, i + 1 - start));
            start = i + 1;
        }
    }
    if (start < input.size()) emit(input.substr(start));
    return out;
}

namespace {

using Phrases = std::vector<std::vector<std::string>>;

Phrases make_phrases(std::initializer_list<std::string_view> list)
{
    Phrases out;
    for (std::string_view p : list) out.push_back(text::words(p));
    return out;
}

const Phrases& issue_openers()
{
    static const Phrases p = make_phrases({"how", "what", "why", "which", "when", "where", "who", "should we",
                                           "can we", "is it", "are there"});
    return p;
}

const Phrases& cons_markers()
{
    static const Phrases p = make_phrases({"however", "but", "problem", "risk", "disadvantage", "disagree",
                                           "concern", "difficult", "cannot", "won't work"});
    return p;
}

const Phrases& pros_markers()
{
    static const Phrases p = make_phrases(
        {"agree", "good idea", "advantage", "benefit", "support", "helpful", "effective", "i like"});
    return p;
}

const Phrases& idea_markers()
{
    static const Phrases p = make_phrases({"suggest", "we should", "let's", "propose", "could", "recommend",
                                           "i think we", "plan to", "need to"});
    return p;
}

bool any_contained(const std::vector<std::string>& tokens, const Phrases& phrases)
{
    return std::any_of(phrases.begin(), phrases.end(),
                       [&](const auto& p) { return text::contains_phrase(tokens, p); });
}

bool any_opening(const std::vector<std::string>& tokens, const Phrases& phrases)
{
    return std::any_of(phrases.begin(), phrases.end(),
                       [&](const auto& p) { return text::starts_with_phrase(tokens, p); });
}

std::string normalize_apostrophes(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        // U+2018 / U+2019 single quotation marks
        if (i + 2 < s.size() && s[i] == '\xE2' && s[i + 1] == '\x80' && (s[i + 2] == '\x98' || s[i + 2] == '\x99')) {
            out.push_back('\'');
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

}  // namespace

Classification classify_builtin(std::string_view sentence, std::optional<NodeType> parent_type)
{
    const std::string normalized = normalize_apostrophes(text::trim(sentence));
    const auto tokens = text::words(normalized);
    const bool under_idea = parent_type == NodeType::Idea;

    if ((!normalized.empty() && normalized.back() == '?') || any_opening(tokens, issue_openers())) {
        return {NodeType::Issue, 1.0};
    }
    if (under_idea && any_contained(tokens, cons_markers())) return {NodeType::Cons, 1.0};
    if (under_idea && any_contained(tokens, pros_markers())) return {NodeType::Pros, 1.0};
    if (any_contained(tokens, idea_markers())) return {NodeType::Idea, 1.0};
    return {NodeType::Idea, 0.5};
}

ClassifierRef ClassifierRef::parse(std::string_view spec)
{
    if (spec == "builtin") return builtin();

    constexpr std::string_view scheme = "http://";
    if (!spec.starts_with(scheme)) {
        throw Error(ErrorCode::InvalidClassifier, "classifier must be 'builtin' or an http:// URL");
    }
    std::string_view rest = spec.substr(scheme.size());
    std::string_view authority = rest.substr(0, rest.find('/'));
    std::string_view path = rest.substr(authority.size());

    ClassifierRef ref;
    ref.kind = Kind::External;
    if (!path.empty()) ref.path = std::string(path);

    std::string_view host = authority;
    if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        host = authority.substr(0, colon);
        std::string_view port = authority.substr(colon + 1);
        int value = 0;
        auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
        if (ec != std::errc{} || end != port.data() + port.size() || value < 1 || value > 65535) {
            throw Error(ErrorCode::InvalidClassifier, "bad port in classifier address");
        }
        ref.port = value;
    }
    const bool host_ok = !host.empty() && std::all_of(host.begin(), host.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
               c == '-';
    });
    if (!host_ok) throw Error(ErrorCode::InvalidClassifier, "bad host in classifier address");
    ref.host = std::string(host);
    return ref;
}

std::string ClassifierRef::to_string() const
{
    if (kind == Kind::Builtin) return "builtin";
    return "http://" + host + ":" + std::to_string(port) + path;
}

std::optional<NodeId> predict_parent(const IbisNode& node, std::optional<PostId> reply_target_post,
                                     const DiscussionTree& tree)
{
    std::vector<NodeId> candidates;  // oldest first
    if (reply_target_post) {
        candidates = tree.nodes_of_post(*reply_target_post);
    } else {
        candidates.push_back(tree.root_id());
        for (NodeId id : tree.nodes_of_post(node.source_post_id)) {
            if (id != node.node_id) candidates.push_back(id);
        }
    }
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
        const IbisNode* c = tree.find(*it);
        if (c != nullptr && *it != node.node_id && allowed_link(node.node_type, c->node_type)) return *it;
    }

    if (allowed_link(node.node_type, tree.root().node_type)) return tree.root_id();
    if (node.node_type == NodeType::Pros || node.node_type == NodeType::Cons) {
        if (const IbisNode* idea = tree.latest_of_type(NodeType::Idea)) return idea->node_id;
    }
    return std::nullopt;
}

ExtractionResult extract_post(const Post& post, DiscussionTree& tree, Classifier& classifier,
                              IdSequence<NodeId>& node_ids, const ExtractionOptions& options)
{
    ExtractionResult result;

    std::vector<Sentence> sentences;
    if (options.gold_label) {
        std::string_view whole = text::trim(post.text);
        if (whole.empty()) throw Error(ErrorCode::EmptyInput, "cannot extract from blank text");
        sentences.push_back(Sentence{std::string(whole), 0});
    } else {
        sentences = segment_text(post.text);
    }

    // Context for sentence 0: the latest linked node of the replied-to post,
    // or the theme root for top-level posts.
    std::optional<NodeType> reply_context;
    if (post.parent_post_id) {
        auto replied = tree.nodes_of_post(*post.parent_post_id);
        if (!replied.empty()) reply_context = tree.node(replied.back()).node_type;
    } else {
        reply_context = tree.root().node_type;
    }

    std::optional<NodeType> first_type;
    for (const Sentence& sentence : sentences) {
        const std::optional<NodeType> context = sentence.index_in_post == 0 ? reply_context : first_type;

        Classification cls;
        if (options.gold_label) {
            cls = {*options.gold_label, 1.0};
        } else {
            try {
                cls = classifier.classify(sentence, context);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ExternalUnavailable) throw;
                cls = classify_builtin(sentence.text, context);
                if (!result.used_fallback) {
                    result.warnings.push_back("classifier unavailable, used builtin rules: " + std::string(e.what()));
                }
                result.used_fallback = true;
            }
        }
        if (!first_type) first_type = cls.node_type;

        IbisNode node;
        node.node_id = node_ids.next();
        node.node_type = cls.node_type;
        node.text = sentence.text;
        node.author_id = post.author_id;
        node.source_post_id = post.post_id;
        node.is_agent = post.is_agent;
        node.confidence = cls.confidence;
        node.created_at = post.created_at;

        auto parent = predict_parent(node, post.parent_post_id, tree);
        if (!parent) {
            result.warnings.push_back("sentence " + std::to_string(sentence.index_in_post) + " (" +
                                      std::string(to_string(node.node_type)) + ") has no legal parent; left unlinked");
            result.unlinked.push_back(std::move(node));
            continue;
        }
        IbisLink link = tree.attach(node, *parent);
        result.attached.push_back(AttachedNode{std::move(node), link});
    }
    return result;
}

std::optional<AttachedNode> attach_agent_post(const Post& post, NodeId target, DiscussionTree& tree,
                                              IdSequence<NodeId>& node_ids)
{
    std::optional<NodeId> parent;
    if (const IbisNode* t = tree.find(target)) {
        if (allowed_link(NodeType::Issue, t->node_type)) {
            parent = target;
        } else if (auto up = tree.parent_of(target); up && allowed_link(NodeType::Issue, tree.node(*up).node_type)) {
            parent = *up;
        }
    }
    if (!parent) return std::nullopt;

    IbisNode node;
    node.node_id = node_ids.next();
    node.node_type = NodeType::Issue;
    node.text = std::string(text::trim(post.text));
    node.author_id = post.author_id;
    node.source_post_id = post.post_id;
    node.is_agent = true;
    node.confidence = 1.0;
    node.created_at = post.created_at;
    IbisLink link = tree.attach(node, *parent);
    return AttachedNode{std::move(node), link};
}

}  // namespace ibis
