// ibisforum: run the discussion server, or use the extraction and analytics
// pieces offline.

#include "ibis/analytics.hpp"
#include "ibis/error.hpp"
#include "ibis/evaluation.hpp"
#include "ibis/extraction.hpp"
#include "ibis/http_api.hpp"
#include "ibis/scheduler.hpp"
#include "ibis/service.hpp"
#include "ibis/transcript.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace ibis;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

struct ServeArgs {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir = "data";
    std::string wordlist;
    std::string templates;
    int threshold = 3;
    int period_s = 60;
    std::string classifier = "builtin";
    std::string admin_token;
};

struct EvalArgs {
    std::string dataset;
    std::size_t folds = 3;
    std::uint64_t seed = 42;
    std::string classifier = "builtin";
};

struct ReplayArgs {
    std::string transcript;
    std::string data_dir;
    bool real_time = false;
    std::vector<std::string> windows;
    bool csv = false;
};

struct FixtureArgs {
    std::string out;
    std::size_t authors = 200;
    std::uint64_t seed = 1;
};

ServiceOptions service_options(const ServeArgs& a)
{
    ServiceOptions o;
    o.admin_token = a.admin_token;
    o.default_policy.threshold = a.threshold;
    o.default_policy.period = std::chrono::seconds{a.period_s};
    o.default_policy.validate();
    if (!a.wordlist.empty()) o.moderation = ModerationRule::load(a.wordlist);
    if (!a.templates.empty()) o.templates = TemplateSet::load(a.templates);
    return o;
}

int serve(const ServeArgs& a)
{
    if (a.admin_token.empty()) {
        std::cerr << "warning: no admin token; administrative calls will be refused\n";
    }
    fs::create_directories(a.data_dir);
    Store store((fs::path(a.data_dir) / "forum.db").string());
    std::shared_ptr<Classifier> classifier = make_classifier(ClassifierRef::parse(a.classifier));
    ForumService service(store, classifier, service_options(a));
    FacilitatorScheduler scheduler(service);
    HttpApi api(service);

    const int port = api.start(a.host, a.port);
    scheduler.start();
    std::cout << "listening on http://" << a.host << ":" << port << " (classifier " << classifier->name() << ")"
              << std::endl;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds{200});

    scheduler.stop();
    api.stop();
    return 0;
}

int classify(const std::string& text, const std::string& parent, const std::string& classifier_spec)
{
    std::optional<NodeType> parent_type;
    if (!parent.empty()) {
        parent_type = parse_node_type(parent);
        if (!parent_type) throw CLI::ValidationError("--parent", "unknown node type " + parent);
    }
    auto classifier = make_classifier(ClassifierRef::parse(classifier_spec));
    for (const Sentence& s : segment_text(text)) {
        const Classification c = classifier->classify(s, parent_type);
        std::printf("%-5s %.2f  %s\n", std::string(to_string(c.node_type)).c_str(), c.confidence, s.text.c_str());
    }
    return 0;
}

int evaluate_nodes_cmd(const EvalArgs& a)
{
    const LabeledDataset data = load_dataset(a.dataset);
    auto classifier = make_classifier(ClassifierRef::parse(a.classifier));
    const MetricsReport r = evaluate_nodes(data, a.folds, a.seed, *classifier);
    std::printf("%s: %zu items, %zu-fold, seed %llu, classifier %s\n", data.name.c_str(), data.size(), a.folds,
                static_cast<unsigned long long>(a.seed), classifier->name().c_str());
    std::printf("%-6s %9s %9s %9s %8s\n", "class", "precision", "recall", "f", "support");
    for (const auto& [type, m] : r.per_class) {
        std::printf("%-6s %9.2f %9.2f %9.2f %8zu\n", std::string(to_string(type)).c_str(), m.precision, m.recall,
                    m.f_measure, m.support);
    }
    return 0;
}

int evaluate_links_cmd(const std::string& path)
{
    const LabeledDataset data = load_dataset(path);
    const LinkMetricsReport r = evaluate_links(data);
    std::printf("%s: %zu evaluated, %zu unlinked\n", data.name.c_str(), r.evaluated, r.unlinked);
    std::printf("%-12s %9s %9s %8s %8s\n", "link", "precision", "predicted", "correct", "support");
    for (const auto& [type, m] : r.per_link) {
        std::printf("%-12s %9.2f %9zu %8zu %8zu\n", std::string(to_string(type)).c_str(), m.precision, m.predicted,
                    m.correct, m.support);
    }
    return 0;
}

PhaseWindow parse_window(const std::string& spec)
{
    const auto a = spec.find(',');
    const auto b = a == std::string::npos ? a : spec.find(',', a + 1);
    if (b == std::string::npos) throw CLI::ValidationError("--window", "expected label,start_ms,end_ms");
    return PhaseWindow{spec.substr(0, a), from_epoch_ms(std::stoll(spec.substr(a + 1, b - a - 1))),
                       from_epoch_ms(std::stoll(spec.substr(b + 1)))};
}

int replay(const ReplayArgs& a)
{
    const auto records = load_transcript(a.transcript);
    std::string db = ":memory:";
    if (!a.data_dir.empty()) {
        fs::create_directories(a.data_dir);
        db = (fs::path(a.data_dir) / "forum.db").string();
    }
    Store store(db);
    ServiceOptions options;
    options.admin_token = "replay";
    ForumService service(store, std::make_shared<RuleClassifier>(), options);
    const Theme theme = service.create_theme(fs::path(a.transcript).stem().string(), "", "replay");

    const auto started = std::chrono::steady_clock::now();
    const ImportReport report = service.import_transcript(
        theme.theme_id, records, a.real_time ? ReplayClock::RealTime : ReplayClock::Instantaneous, "replay");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (a.csv) {
        std::vector<PhaseWindow> windows;
        for (const std::string& w : a.windows) windows.push_back(parse_window(w));
        const ThemeSnapshot snap = service.snapshot(theme.theme_id);
        if (windows.empty()) windows.push_back(whole_run_window(snap));
        std::cout << export_csv(snap, windows);
        return 0;
    }
    nlohmann::json out{{"report", import_report_to_json(report)},
                       {"stats", stats_to_json(service.get_stats(theme.theme_id))},
                       {"seconds", secs}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

int fixture(const FixtureArgs& a)
{
    const auto records = synthetic_transcript(default_fixture_phases(), a.authors, a.seed);
    if (a.out.empty() || a.out == "-") {
        write_transcript(std::cout, records);
    } else {
        std::ofstream out(a.out);
        if (!out) throw std::runtime_error("cannot write " + a.out);
        write_transcript(out, records);
    }
    for (const FixturePhase& p : default_fixture_phases()) {
        std::cerr << p.label << "," << to_epoch_ms(p.start) << "," << to_epoch_ms(p.end) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"IBIS discussion forum with an automated facilitator"};
    app.require_subcommand(1);

    ServeArgs serve_args;
    auto* s = app.add_subcommand("serve", "run the HTTP server and the facilitator scheduler");
    s->set_config("--config", "", "INI/TOML file with any of the options below");
    s->add_option("--host", serve_args.host, "listen address")->capture_default_str();
    s->add_option("--port", serve_args.port, "listen port (0 picks one)")->capture_default_str();
    s->add_option("--data-dir", serve_args.data_dir, "database directory")->capture_default_str();
    s->add_option("--wordlist", serve_args.wordlist, "moderation word list, one term per line")->check(CLI::ExistingFile);
    s->add_option("--templates", serve_args.templates, "facilitator templates (JSON)")->check(CLI::ExistingFile);
    s->add_option("--threshold", serve_args.threshold, "default posts per agent post")->capture_default_str();
    s->add_option("--period", serve_args.period_s, "default tick period in seconds")->capture_default_str();
    s->add_option("--classifier", serve_args.classifier, "builtin or http://host:port/path")->capture_default_str();
    s->add_option("--admin-token", serve_args.admin_token, "administrator token")->envname("IBIS_ADMIN_TOKEN");

    std::string text, parent, classifier_spec = "builtin";
    auto* c = app.add_subcommand("classify", "segment and classify a post");
    c->add_option("text", text, "post text")->required();
    c->add_option("--parent", parent, "type of the node being replied to");
    c->add_option("--classifier", classifier_spec)->capture_default_str();

    EvalArgs eval_args;
    auto* en = app.add_subcommand("evaluate-nodes", "k-fold evaluation of node classification");
    en->add_option("dataset", eval_args.dataset, "labeled JSON-lines dataset")->required()->check(CLI::ExistingFile);
    en->add_option("-k,--folds", eval_args.folds)->capture_default_str();
    en->add_option("--seed", eval_args.seed)->capture_default_str();
    en->add_option("--classifier", eval_args.classifier)->capture_default_str();

    std::string link_dataset;
    auto* el = app.add_subcommand("evaluate-links", "leave-one-out evaluation of parent prediction");
    el->add_option("dataset", link_dataset, "labeled JSON-lines dataset with parent_index")
        ->required()
        ->check(CLI::ExistingFile);

    ReplayArgs replay_args;
    auto* r = app.add_subcommand("replay", "import a transcript into a fresh theme and report");
    r->add_option("transcript", replay_args.transcript)->required()->check(CLI::ExistingFile);
    r->add_option("--data-dir", replay_args.data_dir, "persist here instead of in memory");
    r->add_flag("--real-time", replay_args.real_time, "honour timestamp gaps");
    r->add_flag("--csv", replay_args.csv, "print the analytics export instead of the report");
    r->add_option("--window", replay_args.windows, "label,start_ms,end_ms (repeatable; default whole run)");

    FixtureArgs fixture_args;
    auto* f = app.add_subcommand("fixture", "write the synthetic two-phase transcript");
    f->add_option("-o,--out", fixture_args.out, "output file (default stdout)");
    f->add_option("--authors", fixture_args.authors)->capture_default_str();
    f->add_option("--seed", fixture_args.seed)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*s) return serve(serve_args);
        if (*c) return classify(text, parent, classifier_spec);
        if (*en) return evaluate_nodes_cmd(eval_args);
        if (*el) return evaluate_links_cmd(link_dataset);
        if (*r) return replay(replay_args);
        if (*f) return fixture(fixture_args);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what();
        if (!e.detail().empty()) std::cerr << " (" << e.detail() << ")";
        std::cerr << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
