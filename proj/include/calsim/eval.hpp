#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "calsim/engine.hpp"
#include "calsim/qrels.hpp"

namespace calsim {

// E_lambda = (1 - lambda) * E_judge + lambda * E_sent; lambda in [0, 1].
double effort_lambda(double e_judge, double e_sent, double lambda);

// Recall of the system output truncated at effort E: an assessment counts
// only if its full cumulative E_lambda fits within E.
double recall_at_effort(const RunLog& log, const QrelsMap& doc_qrels, double lambda,
                        double effort);

struct GainPoint {
    double effort = 0.0;
    double recall = 0.0;
};

std::vector<GainPoint> gain_curve(const RunLog& log, const QrelsMap& doc_qrels,
                                  double lambda);

void save_gain_curve_csv(const std::vector<GainPoint>& curve, const std::string& path);

// Per-topic and mean recall at E = a*R + b for each effort model; rows keyed
// (strategy, lambda), one column per topic plus a trailing mean.
struct RecallTable {
    std::vector<std::string> topics;
    std::vector<std::string> strategies;
    std::vector<double> lambdas;
    int a = 1;
    long long b = 0;
    // recall[strategy][lambda_index][topic_index]
    std::map<std::string, std::vector<std::vector<double>>> recall;

    std::vector<double> per_topic(const std::string& strategy, std::size_t lambda_idx) const {
        return recall.at(strategy).at(lambda_idx);
    }
    double mean(const std::string& strategy, std::size_t lambda_idx) const;
};

// runs: topic -> strategy -> log. R per topic comes from doc_qrels.
RecallTable recall_table(const std::map<std::string, std::map<std::string, RunLog>>& runs,
                         const QrelsMap& doc_qrels, int a, long long b,
                         const std::vector<double>& lambdas);

void save_recall_table_csv(const RecallTable& table, const std::string& path);

// Paired two-sided Student's t-test over per-topic recall differences
// (B minus A), with the 95% confidence interval of the mean difference.
struct ComparisonResult {
    std::size_t n = 0;
    double mean_diff = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_value = 1.0;
    bool degenerate = false;  // zero variance: CI collapses to the mean
};

ComparisonResult compare_strategies(const std::vector<double>& recalls_a,
                                    const std::vector<double>& recalls_b);

struct SweepPoint {
    double lambda = 0.0;
    ComparisonResult result;
};

// compare_strategies at E_lambda = a*R over each lambda in the grid.
std::vector<SweepPoint> lambda_sweep(
    const std::map<std::string, std::map<std::string, RunLog>>& runs,
    const QrelsMap& doc_qrels, const std::string& strategy_a, const std::string& strategy_b,
    int a, const std::vector<double>& grid);

void save_sweep_csv(const std::vector<SweepPoint>& sweep, int a, const std::string& path);

}  // namespace calsim
