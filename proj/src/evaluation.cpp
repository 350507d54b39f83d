#include "ibis/evaluation.hpp"

#include "ibis/error.hpp"
#include "ibis/random.hpp"

#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

namespace ibis {

Prf prf(const ConfusionCounts& c) noexcept
{
    Prf out;
    if (c.tp + c.fp > 0) out.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0) out.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (out.precision + out.recall > 0.0) {
        out.f_measure = 2.0 * out.precision * out.recall / (out.precision + out.recall);
    }
    return out;
}

std::map<NodeType, Prf> prf(const std::map<NodeType, ConfusionCounts>& per_class)
{
    std::map<NodeType, Prf> out;
    for (const auto& [cls, counts] : per_class) out.emplace(cls, prf(counts));
    return out;
}

ConfusionCounts ConfusionMatrix::counts(NodeType cls) const noexcept
{
    ConfusionCounts c;
    const std::size_t i = idx(cls);
    c.tp = cells_[i][i];
    for (std::size_t j = 0; j < 4; ++j) {
        if (j == i) continue;
        c.fp += cells_[j][i];
        c.fn += cells_[i][j];
    }
    return c;
}

std::size_t ConfusionMatrix::total() const noexcept
{
    std::size_t sum = 0;
    for (const auto& row : cells_) sum = std::accumulate(row.begin(), row.end(), sum);
    return sum;
}

std::vector<std::vector<std::size_t>> fold_partition(std::size_t n, std::size_t k, std::uint64_t seed)
{
    if (k == 0) throw Error(ErrorCode::OutOfRange, "fold count must be positive");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    shuffle_in_place(order, rng);
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t begin = f * n / k;
        const std::size_t end = (f + 1) * n / k;
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(begin),
                        order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return folds;
}

MetricsReport evaluate_nodes(const LabeledDataset& dataset, std::size_t k, std::uint64_t seed,
                             Classifier& classifier)
{
    if (k < 2) throw Error(ErrorCode::OutOfRange, "k-fold evaluation needs k >= 2");
    const std::size_t n = dataset.size();
    if (n < k) {
        throw Error(ErrorCode::DatasetTooSmall,
                    "dataset has " + std::to_string(n) + " items, fewer than k=" + std::to_string(k));
    }
    for (NodeType t : kAllNodeTypes) {
        bool present = false;
        for (const LabeledItem& item : dataset.items) present = present || item.label == t;
        if (!present) throw Error(ErrorCode::MissingClass, "no item labeled " + std::string(to_string(t)));
    }

    MetricsReport report;
    report.protocol = {Protocol::Kind::KFold, k};
    report.seed = seed;

    const auto folds = fold_partition(n, k, seed);
    for (const auto& fold : folds) {
        std::unordered_set<std::size_t> held(fold.begin(), fold.end());
        std::vector<LabeledItem> training;
        training.reserve(n - fold.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!held.contains(i)) training.push_back(dataset.items[i]);
        }
        classifier.train(training);

        for (std::size_t i : fold) {
            const LabeledItem& item = dataset.items[i];
            std::optional<NodeType> context;
            if (item.parent_index) context = dataset.items[*item.parent_index].label;
            Classification cls = classifier.classify(Sentence{item.text, 0}, context);
            report.confusion.add(item.label, cls.node_type);
        }
    }

    for (NodeType t : kAllNodeTypes) {
        Prf m = prf(report.confusion.counts(t));
        ClassMetrics cm{m.precision, m.recall, m.f_measure, 0};
        for (NodeType p : kAllNodeTypes) cm.support += report.confusion.at(t, p);
        report.per_class.emplace(t, cm);
    }
    return report;
}

LinkMetricsReport evaluate_links(const LabeledDataset& dataset)
{
    const auto& items = dataset.items;
    if (items.size() < 2) throw Error(ErrorCode::DatasetTooSmall, "link evaluation needs a theme and one reply");
    if (items[0].parent_index || items[0].label != NodeType::Issue) {
        throw Error(ErrorCode::MalformedDataset, "item 0 must be the theme: an issue without parent");
    }
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (!items[i].parent_index) {
            throw Error(ErrorCode::MissingParentLabels, "item " + std::to_string(i) + " has no parent_index");
        }
        const std::size_t p = *items[i].parent_index;
        if (p >= i) throw Error(ErrorCode::MalformedDataset, "item " + std::to_string(i) + " parent is not earlier");
        if (!allowed_link(items[i].label, items[p].label)) {
            throw Error(ErrorCode::MalformedDataset, "item " + std::to_string(i) + " has an illegal gold link");
        }
    }

    auto make_node = [&](std::size_t i) {
        IbisNode n;
        n.node_id = NodeId{i + 1};
        n.node_type = items[i].label;
        n.text = items[i].text;
        n.author_id = ParticipantId{kFirstParticipantId};
        n.source_post_id = PostId{i + 1};
        n.created_at = from_epoch_ms(static_cast<std::int64_t>(i));
        return n;
    };

    LinkMetricsReport report;
    for (LinkType t : kAllLinkTypes) report.per_link.emplace(t, LinkMetrics{});
    for (std::size_t i = 1; i < items.size(); ++i) {
        const LabeledItem& item = items[i];
        ++report.per_link[*link_type_for(item.label, items[*item.parent_index].label)].support;
    }

    for (std::size_t held = 1; held < items.size(); ++held) {
        // Parents precede children, so one forward pass marks the held item's
        // descendants.
        std::vector<bool> excluded(items.size(), false);
        excluded[held] = true;
        for (std::size_t j = held + 1; j < items.size(); ++j) {
            excluded[j] = excluded[*items[j].parent_index];
        }

        DiscussionTree tree(ThemeId{0}, make_node(0));
        for (std::size_t j = 1; j < items.size(); ++j) {
            if (!excluded[j]) tree.attach(make_node(j), NodeId{*items[j].parent_index + 1});
        }

        ++report.evaluated;
        const IbisNode node = make_node(held);
        auto predicted = predict_parent(node, std::nullopt, tree);
        if (!predicted) {
            ++report.unlinked;
            continue;
        }
        const LinkType type = *link_type_for(node.node_type, tree.node(*predicted).node_type);
        LinkMetrics& m = report.per_link[type];
        ++m.predicted;
        if (*predicted == NodeId{*items[held].parent_index + 1}) ++m.correct;
    }

    for (auto& [type, m] : report.per_link) {
        m.precision = m.predicted == 0 ? 0.0 : static_cast<double>(m.correct) / static_cast<double>(m.predicted);
    }
    return report;
}

}  // namespace ibis
