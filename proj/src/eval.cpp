#include "calsim/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace calsim {

double effort_lambda(double e_judge, double e_sent, double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("lambda must lie in [0, 1]");
    if (e_judge < 0.0 || e_sent < 0.0)
        throw std::invalid_argument("effort must be non-negative");
    // e_judge + lambda * (e_sent - e_judge): algebraically the convex
    // combination, and exactly e_judge whenever the two efforts coincide
    // (so sentence-feedback recall is bit-identical across lambda).
    return e_judge + lambda * (e_sent - e_judge);
}

double recall_at_effort(const RunLog& log, const QrelsMap& doc_qrels, double lambda,
                        double effort) {
    std::size_t R = doc_qrels.relevant_count(log.topic);
    if (R == 0) throw std::runtime_error("no relevant documents for topic " + log.topic);
    std::set<std::string> seen;
    std::size_t hits = 0;
    for (const auto& r : log.records) {
        double e = effort_lambda(double(r.cum_judge), double(r.cum_sent), lambda);
        if (e > effort) break;
        if (doc_qrels.is_relevant(log.topic, r.doc_id) && seen.insert(r.doc_id).second)
            ++hits;
    }
    return double(hits) / double(R);
}

std::vector<GainPoint> gain_curve(const RunLog& log, const QrelsMap& doc_qrels,
                                  double lambda) {
    std::size_t R = doc_qrels.relevant_count(log.topic);
    if (R == 0) throw std::runtime_error("no relevant documents for topic " + log.topic);
    std::vector<GainPoint> curve;
    curve.reserve(log.records.size());
    std::set<std::string> seen;
    std::size_t hits = 0;
    for (const auto& r : log.records) {
        if (doc_qrels.is_relevant(log.topic, r.doc_id) && seen.insert(r.doc_id).second)
            ++hits;
        curve.push_back({effort_lambda(double(r.cum_judge), double(r.cum_sent), lambda),
                         double(hits) / double(R)});
    }
    return curve;
}

void save_gain_curve_csv(const std::vector<GainPoint>& curve, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write gain curve: " + path);
    out << "effort,recall\n";
    for (const auto& p : curve) out << p.effort << "," << p.recall << "\n";
}

double RecallTable::mean(const std::string& strategy, std::size_t lambda_idx) const {
    const auto& row = recall.at(strategy).at(lambda_idx);
    double s = 0.0;
    for (double v : row) s += v;
    return row.empty() ? 0.0 : s / double(row.size());
}

RecallTable recall_table(const std::map<std::string, std::map<std::string, RunLog>>& runs,
                         const QrelsMap& doc_qrels, int a, long long b,
                         const std::vector<double>& lambdas) {
    RecallTable table;
    table.a = a;
    table.b = b;
    table.lambdas = lambdas;
    std::set<std::string> strategies;
    for (const auto& [topic, by_strategy] : runs) {
        table.topics.push_back(topic);
        for (const auto& [strategy, log] : by_strategy) strategies.insert(strategy);
    }
    table.strategies.assign(strategies.begin(), strategies.end());

    for (const auto& strategy : table.strategies) {
        auto& rows = table.recall[strategy];
        rows.assign(lambdas.size(), {});
        for (const auto& topic : table.topics) {
            const auto& by_strategy = runs.at(topic);
            auto it = by_strategy.find(strategy);
            if (it == by_strategy.end())
                throw std::runtime_error("missing run for topic " + topic + " strategy " +
                                         strategy);
            double R = double(doc_qrels.relevant_count(topic));
            double effort = double(a) * R + double(b);
            for (std::size_t li = 0; li < lambdas.size(); ++li)
                rows[li].push_back(recall_at_effort(it->second, doc_qrels, lambdas[li], effort));
        }
    }
    return table;
}

void save_recall_table_csv(const RecallTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write recall table: " + path);
    out << "strategy,lambda,effort";
    for (const auto& t : table.topics) out << "," << t;
    out << ",mean\n";
    for (const auto& strategy : table.strategies) {
        for (std::size_t li = 0; li < table.lambdas.size(); ++li) {
            out << strategy << "," << table.lambdas[li] << "," << table.a << "R";
            if (table.b != 0) out << "+" << table.b;
            for (double v : table.per_topic(strategy, li)) out << "," << v;
            out << "," << table.mean(strategy, li) << "\n";
        }
    }
}

ComparisonResult compare_strategies(const std::vector<double>& recalls_a,
                                    const std::vector<double>& recalls_b) {
    if (recalls_a.size() != recalls_b.size())
        throw std::invalid_argument("paired samples must have equal length");
    std::size_t n = recalls_a.size();
    if (n < 2) throw std::invalid_argument("need at least two paired topics");

    ComparisonResult res;
    res.n = n;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += recalls_b[i] - recalls_a[i];
    res.mean_diff = sum / double(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = recalls_b[i] - recalls_a[i] - res.mean_diff;
        ss += d * d;
    }
    double var = ss / double(n - 1);
    if (var <= 0.0) {
        res.degenerate = true;
        res.ci_low = res.ci_high = res.mean_diff;
        res.p_value = res.mean_diff == 0.0 ? 1.0 : 0.0;
        return res;
    }
    double se = std::sqrt(var / double(n));
    boost::math::students_t dist(double(n - 1));
    double t = res.mean_diff / se;
    res.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
    double tcrit = boost::math::quantile(dist, 0.975);
    res.ci_low = res.mean_diff - tcrit * se;
    res.ci_high = res.mean_diff + tcrit * se;
    return res;
}

std::vector<SweepPoint> lambda_sweep(
    const std::map<std::string, std::map<std::string, RunLog>>& runs,
    const QrelsMap& doc_qrels, const std::string& strategy_a, const std::string& strategy_b,
    int a, const std::vector<double>& grid) {
    std::vector<SweepPoint> sweep;
    sweep.reserve(grid.size());
    for (double lambda : grid) {
        std::vector<double> ra, rb;
        for (const auto& [topic, by_strategy] : runs) {
            double R = double(doc_qrels.relevant_count(topic));
            double effort = double(a) * R;
            ra.push_back(recall_at_effort(by_strategy.at(strategy_a), doc_qrels, lambda, effort));
            rb.push_back(recall_at_effort(by_strategy.at(strategy_b), doc_qrels, lambda, effort));
        }
        sweep.push_back({lambda, compare_strategies(ra, rb)});
    }
    return sweep;
}

void save_sweep_csv(const std::vector<SweepPoint>& sweep, int a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write sweep: " + path);
    out << "lambda,a,mean_diff,ci_low,ci_high,p\n";
    for (const auto& p : sweep)
        out << p.lambda << "," << a << "," << p.result.mean_diff << "," << p.result.ci_low
            << "," << p.result.ci_high << "," << p.result.p_value << "\n";
}

}  // namespace calsim
