#pragma once
// Offline evaluation of node and link extraction: k-fold cross-validation
// for node classification, leave-one-out for parent prediction.

#include "ibis/dataset.hpp"
#include "ibis/extraction.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace ibis {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

/// P = TP/(TP+FP), R = TP/(TP+FN), F = 2PR/(P+R); each 0 on a zero denominator.
Prf prf(const ConfusionCounts& counts) noexcept;
std::map<NodeType, Prf> prf(const std::map<NodeType, ConfusionCounts>& per_class);

/// Rows are gold labels, columns predictions, both indexed by NodeType.
class ConfusionMatrix {
public:
    void add(NodeType gold, NodeType predicted) noexcept { ++cells_[idx(gold)][idx(predicted)]; }
    std::size_t at(NodeType gold, NodeType predicted) const noexcept { return cells_[idx(gold)][idx(predicted)]; }
    ConfusionCounts counts(NodeType cls) const noexcept;
    std::size_t total() const noexcept;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    static std::size_t idx(NodeType t) noexcept { return static_cast<std::size_t>(t); }
    std::array<std::array<std::size_t, 4>, 4> cells_{};
};

struct Protocol {
    enum class Kind { KFold, LeaveOneOut };
    Kind kind = Kind::KFold;
    std::size_t k = 3;

    friend bool operator==(const Protocol&, const Protocol&) = default;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    std::size_t support = 0;  // gold items of the class

    friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct MetricsReport {
    Protocol protocol;
    std::uint64_t seed = 0;
    std::map<NodeType, ClassMetrics> per_class;
    ConfusionMatrix confusion;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Link results carry precision only; recall and F-measure are not reported.
struct LinkMetrics {
    double precision = 0.0;
    std::size_t predicted = 0;  // predictions of this link type
    std::size_t correct = 0;
    std::size_t support = 0;    // gold links of this type

    friend bool operator==(const LinkMetrics&, const LinkMetrics&) = default;
};

struct LinkMetricsReport {
    Protocol protocol{Protocol::Kind::LeaveOneOut, 0};
    std::map<LinkType, LinkMetrics> per_link;  // every LinkType present, possibly with zero support
    std::size_t evaluated = 0;
    std::size_t unlinked = 0;                  // items for which no parent was predicted

    friend bool operator==(const LinkMetricsReport&, const LinkMetricsReport&) = default;
};

/// Seeded shuffle of [0, n) cut into k contiguous folds whose sizes differ
/// by at most one. Identical (n, k, seed) give identical folds everywhere.
std::vector<std::vector<std::size_t>> fold_partition(std::size_t n, std::size_t k, std::uint64_t seed);

/// k-fold cross-validation of node classification. Each held-out item is
/// classified with its gold parent's label as context; one confusion matrix
/// is pooled over all folds. Errors: DatasetTooSmall (n < k), MissingClass,
/// OutOfRange (k < 2).
MetricsReport evaluate_nodes(const LabeledDataset& dataset, std::size_t k, std::uint64_t seed,
                             Classifier& classifier);

/// Leave-one-out evaluation of the builtin parent predictor. Item 0 is the
/// theme (an issue without parent); every later item needs parent_index.
/// For each item the tree is built from all other items (minus the item's
/// own descendants), the item is placed with its parent hidden, and the
/// prediction counts as correct on an exact parent match.
/// Errors: DatasetTooSmall, MissingParentLabels, MalformedDataset.
LinkMetricsReport evaluate_links(const LabeledDataset& dataset);

}  // namespace ibis
