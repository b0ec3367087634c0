#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "calsim/corpus.hpp"
#include "calsim/engine.hpp"
#include "calsim/eval.hpp"
#include "calsim/features.hpp"
#include "calsim/qrels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace calsim;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Topic {
    std::string id;
    std::string statement;
};

std::vector<Topic> load_topics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topics file: " + path);
    std::vector<Topic> topics;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("topic") || !j.contains("statement"))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected {\"topic\", \"statement\"}");
        topics.push_back({j["topic"].get<std::string>(), j["statement"].get<std::string>()});
    }
    return topics;
}

std::vector<double> parse_lambda_grid(const std::string& spec) {
    // "lo:hi:step", or a comma-separated list
    std::vector<double> grid;
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        double lo, hi, step;
        char c1, c2;
        std::istringstream ss(spec);
        if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw std::runtime_error("bad lambda grid: " + spec);
        for (double v = lo; v <= hi + 1e-12; v += step) grid.push_back(std::min(v, 1.0));
    } else {
        std::istringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
    }
    return grid;
}

int cmd_prepare(const std::string& collection_path, const std::string& doc_qrels_path,
                const std::string& sent_qrels_path, const std::string& out_dir) {
    fs::create_directories(out_dir);
    SegmenterConfig seg;
    Collection coll = load_collection(collection_path, seg);
    std::cout << "ingested " << coll.doc_count() << " documents, " << coll.sentence_count()
              << " sentences (union " << coll.union_size() << ")\n";
    save_collection_jsonl(coll, out_dir + "/collection.jsonl");
    Vocabulary vocab = Vocabulary::build(coll);
    vocab.save_tsv(out_dir + "/vocabulary.tsv");
    std::cout << "vocabulary: " << vocab.size() << " terms, N=" << vocab.n_items() << "\n";
    if (!doc_qrels_path.empty() && !sent_qrels_path.empty()) {
        QrelsMap doc_qrels = load_qrels(doc_qrels_path, Granularity::document);
        QrelsMap sent_qrels = load_qrels(sent_qrels_path, Granularity::sentence);
        save_stats_csv(corpus_stats(coll, doc_qrels, sent_qrels), out_dir + "/stats.csv");
        std::cout << "label statistics written to " << out_dir << "/stats.csv\n";
    }
    return 0;
}

int cmd_label_sentences(const std::string& collection_path, const std::string& passages_path,
                        const std::string& doc_qrels_path, const std::string& out_path) {
    SegmenterConfig seg;
    Collection coll = load_collection(collection_path, seg);
    QrelsMap sent_qrels = derive_sentence_qrels_from_passages(load_passages(passages_path), coll);
    if (!doc_qrels_path.empty()) {
        QrelsMap doc_qrels = load_qrels(doc_qrels_path, Granularity::document);
        propagate_nonrelevant(doc_qrels, coll, sent_qrels);
    }
    save_qrels(sent_qrels, out_path);
    std::cout << "sentence qrels written to " << out_path << "\n";
    return 0;
}

int cmd_run(const std::string& manifest_path, std::string store, std::string topics_path,
            std::string doc_qrels_path, std::string sent_qrels_path,
            std::vector<std::string> strategies, std::uint64_t seed, std::string budget_expr,
            std::string out_dir, std::uint64_t iterations, unsigned threads) {
    if (!manifest_path.empty()) {
        std::ifstream in(manifest_path);
        if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
        json m = json::parse(in);
        if (store.empty()) store = m.value("store", "");
        if (topics_path.empty()) topics_path = m.value("topics", "");
        if (doc_qrels_path.empty()) doc_qrels_path = m.value("doc_qrels", "");
        if (sent_qrels_path.empty()) sent_qrels_path = m.value("sent_qrels", "");
        if (strategies.empty() && m.contains("strategies"))
            strategies = m["strategies"].get<std::vector<std::string>>();
        if (seed == 0) seed = m.value("seed", std::uint64_t{1});
        if (budget_expr.empty()) budget_expr = m.value("budget", "");
        if (out_dir.empty()) out_dir = m.value("out", "");
        if (iterations == 0) iterations = m.value("iterations", std::uint64_t{0});
    }
    if (store.empty() || topics_path.empty() || doc_qrels_path.empty() ||
        sent_qrels_path.empty() || strategies.empty() || budget_expr.empty() || out_dir.empty())
        throw CLI::ValidationError(
            "run requires store, topics, doc-qrels, sent-qrels, strategies, budget and out");
    if (seed == 0) seed = 1;

    SegmenterConfig seg;
    Collection coll = load_collection(store + "/collection.jsonl", seg);
    Vocabulary vocab = Vocabulary::load_tsv(store + "/vocabulary.tsv");
    CollectionFeatures features = CollectionFeatures::build(coll, std::move(vocab));
    QrelsMap doc_qrels = load_qrels(doc_qrels_path, Granularity::document);
    QrelsMap sent_qrels = load_qrels(sent_qrels_path, Granularity::sentence);
    std::vector<Topic> topics = load_topics(topics_path);
    Budget budget = Budget::parse(budget_expr);

    fs::create_directories(out_dir);
    // Record the resolved configuration alongside the logs.
    {
        json m;
        m["store"] = store;
        m["topics"] = topics_path;
        m["doc_qrels"] = doc_qrels_path;
        m["sent_qrels"] = sent_qrels_path;
        m["strategies"] = strategies;
        m["seed"] = seed;
        m["budget"] = budget_expr;
        m["iterations"] = iterations;
        std::ofstream out(out_dir + "/manifest.json", std::ios::binary);
        out << m.dump(2) << "\n";
    }

    for (const auto& topic : topics) {
        std::uint64_t R = doc_qrels.relevant_count(topic.id);
        for (const auto& code : strategies) {
            RunConfig cfg;
            cfg.topic_id = topic.id;
            cfg.topic_statement = topic.statement;
            cfg.strategy = StrategyCode::parse(code);
            cfg.seed = derive_seed(seed, topic.id, code);
            cfg.budget = budget.resolve(R);
            if (iterations > 0) cfg.train_params.iterations = iterations;
            cfg.score_threads = threads;
            CalRun run(features, doc_qrels, sent_qrels, cfg);
            RunLog log = run.run();
            std::string path = out_dir + "/" + topic.id + "_" + code + ".tsv";
            log.save_tsv(path);
            std::cout << topic.id << " " << code << ": " << log.records.size()
                      << " assessments (R=" << R << ", budget=" << cfg.budget << ")\n";
        }
    }
    return 0;
}

int cmd_eval(const std::string& logs_dir, const std::string& doc_qrels_path,
             const std::string& out_dir, const std::string& a_list,
             const std::string& b_list, const std::string& lambda_grid_spec,
             const std::string& pair_spec, bool gain_curves) {
    QrelsMap doc_qrels = load_qrels(doc_qrels_path, Granularity::document);
    std::map<std::string, std::map<std::string, RunLog>> runs;
    for (const auto& entry : fs::directory_iterator(logs_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".tsv") continue;
        RunLog log = RunLog::load_tsv(entry.path().string());
        runs[log.topic][log.strategy] = std::move(log);
    }
    if (runs.empty()) throw std::runtime_error("no run logs found in " + logs_dir);
    for (const auto& [topic, by_strategy] : runs)
        if (doc_qrels.relevant_count(topic) == 0)
            throw std::runtime_error("topic " + topic + " has no relevant documents in qrels");

    fs::create_directories(out_dir);
    std::vector<double> lambdas = {0.0, 0.5, 1.0};

    auto parse_ints = [](const std::string& s) {
        std::vector<long long> out;
        std::istringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
        return out;
    };
    for (long long a : parse_ints(a_list)) {
        for (long long b : parse_ints(b_list)) {
            RecallTable table = recall_table(runs, doc_qrels, int(a), b, lambdas);
            std::string name = out_dir + "/recall_" + std::to_string(a) + "R";
            if (b != 0) name += "+" + std::to_string(b);
            save_recall_table_csv(table, name + ".csv");
        }
    }

    if (gain_curves) {
        for (const auto& [topic, by_strategy] : runs)
            for (const auto& [strategy, log] : by_strategy)
                for (double lambda : lambdas)
                    save_gain_curve_csv(gain_curve(log, doc_qrels, lambda),
                                        out_dir + "/gain_" + topic + "_" + strategy + "_l" +
                                            std::to_string(lambda).substr(0, 4) + ".csv");
    }

    if (!pair_spec.empty()) {
        auto colon = pair_spec.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--pairs expects A:B strategy codes");
        std::string sa = pair_spec.substr(0, colon);
        std::string sb = pair_spec.substr(colon + 1);
        StrategyCode::parse(sa);
        StrategyCode::parse(sb);
        for (const auto& [topic, by_strategy] : runs)
            if (!by_strategy.contains(sa) || !by_strategy.contains(sb))
                throw std::runtime_error("topic " + topic + " lacks runs for " + pair_spec);
        std::vector<double> grid = parse_lambda_grid(lambda_grid_spec);
        for (long long a : parse_ints(a_list)) {
            auto sweep = lambda_sweep(runs, doc_qrels, sa, sb, int(a), grid);
            save_sweep_csv(sweep, int(a),
                           out_dir + "/sweep_" + sa + "_" + sb + "_" + std::to_string(a) +
                               "R.csv");
        }
    }
    std::cout << "reports written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous active learning simulation over document and sentence feedback"};
    app.require_subcommand(1);

    // prepare
    std::string collection, doc_qrels, sent_qrels, out;
    auto* prepare = app.add_subcommand("prepare", "Ingest a collection and build the vocabulary");
    prepare->add_option("--collection", collection, "JSON-lines file or directory of .txt files")
        ->required();
    prepare->add_option("--doc-qrels", doc_qrels, "document qrels (for label statistics)");
    prepare->add_option("--sent-qrels", sent_qrels, "sentence qrels (for label statistics)");
    prepare->add_option("--out", out, "output directory")->required();

    // label-sentences
    std::string passages, ls_collection, ls_doc_qrels, ls_out;
    auto* label = app.add_subcommand(
        "label-sentences", "Derive sentence qrels from passage judgments");
    label->add_option("--collection", ls_collection, "collection path")->required();
    label->add_option("--passages", passages, "4-column passage judgments")->required();
    label->add_option("--doc-qrels", ls_doc_qrels,
                      "document qrels for non-relevant propagation");
    label->add_option("--out", ls_out, "output sentence qrels path")->required();

    // run
    std::string manifest, store, topics, r_doc_qrels, r_sent_qrels, budget, r_out;
    std::vector<std::string> strategies;
    std::uint64_t seed = 0, iterations = 0;
    unsigned threads = 1;
    auto* runc = app.add_subcommand("run", "Execute strategy runs and write run logs");
    runc->add_option("--manifest", manifest, "JSON manifest with run settings");
    runc->add_option("--store", store, "prepared store directory");
    runc->add_option("--topics", topics, "JSON-lines topics file");
    runc->add_option("--doc-qrels", r_doc_qrels, "document qrels");
    runc->add_option("--sent-qrels", r_sent_qrels, "sentence qrels");
    runc->add_option("--strategies", strategies, "strategy codes, e.g. ddd sdd");
    runc->add_option("--seed", seed, "base seed (per-run seeds are derived)");
    runc->add_option("--budget", budget, "judgment budget, e.g. 4R+1000 or 500");
    runc->add_option("--out", r_out, "output directory for run logs");
    runc->add_option("--iterations", iterations, "training iterations override");
    runc->add_option("--threads", threads, "scoring threads");

    // eval
    std::string logs, e_doc_qrels, e_out, a_list = "1,2,4", b_list = "0",
                      lambda_grid = "0:1:0.05", pairs;
    bool curves = false;
    auto* evalc = app.add_subcommand("eval", "Compute recall tables and comparisons");
    evalc->add_option("--logs", logs, "directory of run logs")->required();
    evalc->add_option("--doc-qrels", e_doc_qrels, "document qrels")->required();
    evalc->add_option("--out", e_out, "output directory")->required();
    evalc->add_option("--a", a_list, "effort multiples of R (comma-separated)");
    evalc->add_option("--b", b_list, "effort offsets (comma-separated)");
    evalc->add_option("--lambda-grid", lambda_grid, "grid lo:hi:step or comma list");
    evalc->add_option("--pairs", pairs, "strategy pair A:B for the comparison sweep");
    evalc->add_flag("--gain-curves", curves, "emit per-run gain curve CSVs");

    try {
        app.parse(argc, argv);
        if (*prepare) return cmd_prepare(collection, doc_qrels, sent_qrels, out);
        if (*label) return cmd_label_sentences(ls_collection, passages, ls_doc_qrels, ls_out);
        if (*runc)
            return cmd_run(manifest, store, topics, r_doc_qrels, r_sent_qrels, strategies,
                           seed, budget, r_out, iterations, threads);
        if (*evalc)
            return cmd_eval(logs, e_doc_qrels, e_out, a_list, b_list, lambda_grid, pairs,
                            curves);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
