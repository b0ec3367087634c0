#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "calsim/sparse.hpp"

namespace calsim {

struct TrainParams {
    double lambda = 1e-4;
    std::uint64_t iterations = 200000;
    std::uint64_t seed = 1;
};

struct LabeledExample {
    SparseVector vector;
    int label = 0;  // +1 relevant, -1 non-relevant
};

struct ModelState {
    std::vector<double> weights;  // dense over term_ids
    TrainParams params;

    double score(const SparseVector& x) const { return dot(weights, x); }

    // TSV round-trip: header "lambda iterations seed", then "term_id weight".
    void save_tsv(const std::string& path) const;
    static ModelState load_tsv(const std::string& path);
};

// Pairwise (ROC-area) Pegasos training on logistic loss. Each iteration
// samples one positive and one negative example uniformly with replacement,
// forms d = x+ - x-, takes a gradient step on log(1 + exp(-w.d)) with step
// size 1/(lambda*t) and L2 shrinkage, then projects w onto the ball of
// radius 1/sqrt(lambda). Deterministic given example order and seed.
//
// `observer`, when set, is called after every update with (t, ||w||).
ModelState train(const std::vector<LabeledExample>& examples, const TrainParams& params,
                 std::size_t dim,
                 const std::function<void(std::uint64_t, double)>& observer = nullptr);

// Bulk scoring; output order matches input order. `threads` > 1 splits the
// items across workers (scores are pure reads, results identical).
std::vector<double> score_all(const ModelState& model,
                              const std::vector<const SparseVector*>& items,
                              unsigned threads = 1);

}  // namespace calsim
