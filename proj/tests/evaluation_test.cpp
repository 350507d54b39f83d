#include "ibis/error.hpp"
#include "ibis/evaluation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace ibis;

namespace {

// Second route to the same metrics: F written as 2TP / (2TP + FP + FN).
Prf reference_prf(std::size_t tp, std::size_t fp, std::size_t fn)
{
    Prf r;
    r.precision = (tp + fp) == 0 ? 0.0 : double(tp) / double(tp + fp);
    r.recall = (tp + fn) == 0 ? 0.0 : double(tp) / double(tp + fn);
    r.f_measure = (2 * tp + fp + fn) == 0 || tp == 0 ? 0.0 : 2.0 * double(tp) / double(2 * tp + fp + fn);
    return r;
}

LabeledItem item(std::string text, NodeType label, std::optional<std::size_t> parent = std::nullopt)
{
    return LabeledItem{std::move(text), label, parent};
}

// Every item is classified correctly by the rule table.
LabeledDataset perfect_dataset()
{
    LabeledDataset ds;
    ds.name = "perfect";
    ds.items = {
        item("How do we reduce traffic?", NodeType::Issue),
        item("We should build a metro line.", NodeType::Idea, 0),
        item("I agree with the metro.", NodeType::Pros, 1),
        item("But the cost is a risk.", NodeType::Cons, 1),
        item("What about buses?", NodeType::Issue, 1),
        item("Let's add bus lanes.", NodeType::Idea, 4),
        item("Bus lanes are an effective fix.", NodeType::Pros, 5),
        item("However, shops will lose parking.", NodeType::Cons, 5),
        item("Why is parking scarce?", NodeType::Issue, 7),
    };
    return ds;
}

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected ibis::Error";
    return ErrorCode::StorageFailure;
}

class MajorityClassifier final : public Classifier {
public:
    std::vector<std::size_t> training_sizes;

    Classification classify(const Sentence&, std::optional<NodeType>) override { return {majority_, 1.0}; }
    void train(std::span<const LabeledItem> training) override
    {
        training_sizes.push_back(training.size());
        std::map<NodeType, int> votes;
        for (const auto& it : training) ++votes[it.label];
        majority_ = std::max_element(votes.begin(), votes.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
    }
    std::string name() const override { return "majority"; }

private:
    NodeType majority_ = NodeType::Idea;
};

}  // namespace

TEST(Prf, EmptyDenominatorsGiveZero)
{
    Prf r = prf(ConfusionCounts{0, 0, 0});
    EXPECT_EQ(r.precision, 0.0);
    EXPECT_EQ(r.recall, 0.0);
    EXPECT_EQ(r.f_measure, 0.0);
    EXPECT_EQ(prf(ConfusionCounts{0, 5, 0}).precision, 0.0);
    EXPECT_EQ(prf(ConfusionCounts{0, 0, 5}).f_measure, 0.0);
}

TEST(Prf, IssueRowOfReportedTable)
{
    Prf r = prf(ConfusionCounts{89, 11, 11});
    EXPECT_NEAR(r.precision, 0.89, 1e-12);
    EXPECT_NEAR(r.recall, 0.89, 1e-12);
    EXPECT_NEAR(r.f_measure, 0.89, 1e-12);
}

TEST(Prf, ToyConfusion)
{
    Prf r = prf(ConfusionCounts{2, 1, 1});
    EXPECT_NEAR(r.precision, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(r.recall, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(r.f_measure, 2.0 / 3.0, 1e-15);
}

TEST(Prf, MatchesSecondDerivationAndHarmonicBounds)
{
    std::mt19937_64 rng(42);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t tp = rng() % 30, fp = rng() % 30, fn = rng() % 30;
        const Prf got = prf(ConfusionCounts{tp, fp, fn});
        const Prf want = reference_prf(tp, fp, fn);
        EXPECT_NEAR(got.precision, want.precision, 1e-12);
        EXPECT_NEAR(got.recall, want.recall, 1e-12);
        EXPECT_NEAR(got.f_measure, want.f_measure, 1e-12);
        for (double v : {got.precision, got.recall, got.f_measure}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        if (got.precision > 0 && got.recall > 0) {
            EXPECT_LE(got.f_measure, std::max(got.precision, got.recall) + 1e-12);
            EXPECT_GE(got.f_measure, std::min(got.precision, got.recall) - 1e-12);
        }
    }
}

TEST(Prf, PerClassMap)
{
    auto m = prf(std::map<NodeType, ConfusionCounts>{{NodeType::Issue, {2, 1, 1}}, {NodeType::Cons, {0, 0, 0}}});
    EXPECT_NEAR(m.at(NodeType::Issue).f_measure, 2.0 / 3.0, 1e-15);
    EXPECT_EQ(m.at(NodeType::Cons).f_measure, 0.0);
}

TEST(ConfusionMatrix, DerivesPerClassCounts)
{
    ConfusionMatrix cm;
    cm.add(NodeType::Issue, NodeType::Issue);
    cm.add(NodeType::Issue, NodeType::Issue);
    cm.add(NodeType::Issue, NodeType::Idea);   // FN for issue
    cm.add(NodeType::Pros, NodeType::Issue);   // FP for issue
    auto c = cm.counts(NodeType::Issue);
    EXPECT_EQ(c.tp, 2u);
    EXPECT_EQ(c.fp, 1u);
    EXPECT_EQ(c.fn, 1u);
    EXPECT_EQ(cm.total(), 4u);
}

TEST(FoldPartition, DisjointCoveringBalanced)
{
    std::mt19937_64 rng(1);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = 1 + rng() % 300;
        const std::size_t k = 1 + rng() % std::min<std::size_t>(n, 10);
        const auto seed = rng();
        auto folds = fold_partition(n, k, seed);
        ASSERT_EQ(folds.size(), k);
        std::set<std::size_t> seen;
        std::size_t smallest = n, largest = 0;
        for (const auto& f : folds) {
            smallest = std::min(smallest, f.size());
            largest = std::max(largest, f.size());
            for (std::size_t i : f) {
                EXPECT_LT(i, n);
                EXPECT_TRUE(seen.insert(i).second) << "index in two folds";
            }
        }
        EXPECT_EQ(seen.size(), n);
        EXPECT_LE(largest - smallest, 1u);
        EXPECT_EQ(fold_partition(n, k, seed), folds);
    }
}

TEST(FoldPartition, SeedChangesOrder)
{
    EXPECT_NE(fold_partition(50, 3, 1), fold_partition(50, 3, 2));
}

TEST(EvaluateNodes, PerfectClassifierScoresOne)
{
    RuleClassifier rules;
    auto report = evaluate_nodes(perfect_dataset(), 3, 7, rules);
    EXPECT_EQ(report.protocol, (Protocol{Protocol::Kind::KFold, 3}));
    EXPECT_EQ(report.seed, 7u);
    EXPECT_EQ(report.confusion.total(), 9u);
    for (NodeType t : kAllNodeTypes) {
        const auto& m = report.per_class.at(t);
        EXPECT_EQ(m.precision, 1.0) << to_string(t);
        EXPECT_EQ(m.recall, 1.0) << to_string(t);
        EXPECT_EQ(m.f_measure, 1.0) << to_string(t);
    }
    EXPECT_EQ(report.per_class.at(NodeType::Issue).support, 3u);
}

TEST(EvaluateNodes, DeterministicForSameSeed)
{
    auto ds = perfect_dataset();
    ds.items.push_back(item("Roads are bad.", NodeType::Cons, 1));  // misclassified as idea
    ds.items.push_back(item("Is it raining", NodeType::Idea));      // misclassified as issue
    MajorityClassifier a, b;
    EXPECT_EQ(evaluate_nodes(ds, 3, 99, a), evaluate_nodes(ds, 3, 99, b));
    RuleClassifier rules;
    auto r1 = evaluate_nodes(ds, 3, 99, rules);
    auto r2 = evaluate_nodes(ds, 3, 99, rules);
    EXPECT_EQ(r1, r2);
    EXPECT_LT(r1.per_class.at(NodeType::Cons).recall, 1.0);
}

TEST(EvaluateNodes, TrainsOncePerFoldOnTheComplement)
{
    auto ds = perfect_dataset();  // 9 items -> folds of 3
    MajorityClassifier majority;
    evaluate_nodes(ds, 3, 5, majority);
    EXPECT_EQ(majority.training_sizes, (std::vector<std::size_t>{6, 6, 6}));
}

TEST(EvaluateNodes, Errors)
{
    RuleClassifier rules;
    auto ds = perfect_dataset();
    EXPECT_EQ(code_of([&] { evaluate_nodes(ds, 10, 1, rules); }), ErrorCode::DatasetTooSmall);
    EXPECT_EQ(code_of([&] { evaluate_nodes(ds, 1, 1, rules); }), ErrorCode::OutOfRange);
    auto no_cons = ds;
    std::erase_if(no_cons.items, [](const LabeledItem& i) { return i.label == NodeType::Cons; });
    EXPECT_EQ(code_of([&] { evaluate_nodes(no_cons, 3, 1, rules); }), ErrorCode::MissingClass);
}

TEST(EvaluateLinks, ChainIsRecovered)
{
    LabeledDataset ds;
    ds.items = {item("Theme", NodeType::Issue), item("Idea", NodeType::Idea, 0), item("Pro", NodeType::Pros, 1)};
    auto report = evaluate_links(ds);
    EXPECT_EQ(report.protocol.kind, Protocol::Kind::LeaveOneOut);
    EXPECT_EQ(report.evaluated, 2u);
    EXPECT_EQ(report.per_link.at(LinkType::IdeaToIssue).precision, 1.0);
    EXPECT_EQ(report.per_link.at(LinkType::ProsToIdea).precision, 1.0);
    EXPECT_EQ(report.per_link.size(), kAllLinkTypes.size());
    EXPECT_EQ(report.per_link.at(LinkType::IssueToIdea).support, 0u);
}

TEST(EvaluateLinks, WrongPredictionScoresZero)
{
    // The pro belongs to the first idea, but the baseline picks the latest.
    LabeledDataset ds;
    ds.items = {item("Theme", NodeType::Issue), item("Idea A", NodeType::Idea, 0), item("Idea B", NodeType::Idea, 0),
                item("Pro of A", NodeType::Pros, 1)};
    auto report = evaluate_links(ds);
    EXPECT_EQ(report.per_link.at(LinkType::ProsToIdea).predicted, 1u);
    EXPECT_EQ(report.per_link.at(LinkType::ProsToIdea).precision, 0.0);
    EXPECT_EQ(report.per_link.at(LinkType::IdeaToIssue).precision, 1.0);
}

TEST(EvaluateLinks, IssueDirectionsAreCountedEvenWhenUnpredicted)
{
    LabeledDataset ds;
    ds.items = {item("Theme", NodeType::Issue), item("Idea", NodeType::Idea, 0),
                item("Follow-up question", NodeType::Issue, 1), item("Con", NodeType::Cons, 1),
                item("Question on con", NodeType::Issue, 3)};
    auto report = evaluate_links(ds);
    EXPECT_EQ(report.per_link.at(LinkType::IssueToIdea).support, 1u);
    EXPECT_EQ(report.per_link.at(LinkType::IssueToCons).support, 1u);
    EXPECT_EQ(report.per_link.at(LinkType::IssueToIdea).predicted, 0u);
    EXPECT_EQ(report.unlinked, 2u);
    EXPECT_EQ(report.per_link.at(LinkType::ConsToIdea).precision, 1.0);
}

TEST(EvaluateLinks, Errors)
{
    LabeledDataset tiny;
    tiny.items = {item("Theme", NodeType::Issue)};
    EXPECT_EQ(code_of([&] { evaluate_links(tiny); }), ErrorCode::DatasetTooSmall);

    LabeledDataset unlabeled;
    unlabeled.items = {item("Theme", NodeType::Issue), item("Idea", NodeType::Idea)};
    EXPECT_EQ(code_of([&] { evaluate_links(unlabeled); }), ErrorCode::MissingParentLabels);

    LabeledDataset illegal;
    illegal.items = {item("Theme", NodeType::Issue), item("Pro", NodeType::Pros, 0)};
    EXPECT_EQ(code_of([&] { evaluate_links(illegal); }), ErrorCode::MalformedDataset);
}

TEST(Dataset, ReadsJsonLinesAndReportsBadLines)
{
    std::istringstream in(
        "{\"text\": \"Theme?\", \"label\": \"issue\"}\n"
        "\n"
        "{\"text\": \"We should act.\", \"label\": \"IDEA\", \"parent_index\": 0}\n");
    auto ds = read_dataset(in, "mini");
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds.items[1].label, NodeType::Idea);
    EXPECT_EQ(ds.items[1].parent_index, 0u);

    std::ostringstream out;
    write_dataset(out, ds);
    std::istringstream again(out.str());
    auto back = read_dataset(again, "mini");
    EXPECT_EQ(back.items[0].text, "Theme?");
    EXPECT_EQ(back.items[1].parent_index, 0u);

    for (const char* bad : {"{\"text\": \"x\", \"label\": \"claim\"}", "{\"text\": \" \", \"label\": \"idea\"}",
                            "{\"text\": \"x\", \"label\": \"idea\", \"parent_index\": 0}", "not json"}) {
        std::istringstream b(bad);
        try {
            read_dataset(b, "bad");
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::MalformedDataset);
            EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
        }
    }
}
