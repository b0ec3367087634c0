#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "calsim/classifier.hpp"
#include "calsim/features.hpp"
#include "calsim/qrels.hpp"

namespace calsim {

enum class Level : char { document = 'd', sentence = 's' };

// Three binary choices: what the reviewer sees, what enters the training
// set, and which granularity drives selection.
struct StrategyCode {
    Level present = Level::document;
    Level train_granularity = Level::document;
    Level select = Level::document;

    static StrategyCode parse(const std::string& code);  // "[ds]{3}"
    std::string str() const;
};

// Effort budget expressed as a*R + b judgments, or an absolute count.
struct Budget {
    double a = 0.0;
    long long b = 0;

    static Budget parse(const std::string& expr);  // "4R+1000", "2R", "500"
    std::uint64_t resolve(std::uint64_t R) const;
};

struct AssessmentRecord {
    std::uint64_t ordinal = 0;  // 1-based
    std::uint64_t batch_index = 0;
    std::string doc_id;
    std::string presented_item;  // doc_id or sent_id
    bool relevant = false;
    std::uint64_t sentences_read = 0;
    std::uint64_t cum_judge = 0;
    std::uint64_t cum_sent = 0;
};

struct RunLog {
    std::string topic;
    std::string strategy;
    std::uint64_t seed = 0;
    std::vector<AssessmentRecord> records;

    void save_tsv(const std::string& path) const;
    static RunLog load_tsv(const std::string& path);
};

struct RunConfig {
    std::string topic_id;
    std::string topic_statement;
    StrategyCode strategy;
    std::uint64_t seed = 1;
    std::uint64_t budget = 0;  // judgments (already resolved against R)
    TrainParams train_params;
    unsigned score_threads = 1;
    std::size_t random_negatives = 100;
};

// (best_sent, best_doc) pair of union item indices.
struct SelectedPair {
    std::size_t sent_item = 0;
    std::size_t doc_item = 0;
};

// Executes the feedback loop for one (topic, strategy): seed the training
// set with the topic statement as a relevant document, then repeat
// augment-train-select-assess rounds with batch size growing by ceil(B/10)
// until the judgment budget is spent or no unreviewed document remains.
class CalRun {
public:
    CalRun(const CollectionFeatures& features, const QrelsMap& doc_qrels,
           const QrelsMap& sent_qrels, RunConfig config);

    // One full round; returns the records it appended (empty when done).
    std::vector<AssessmentRecord> step_batch();
    RunLog run();

    bool done() const;
    std::uint64_t batch_size() const { return batch_size_; }
    // Persistent training set size, counting the topic pseudo-document.
    std::size_t training_set_size() const { return training_.size() + 1; }
    const std::vector<std::size_t>& output() const { return output_; }

    // Score-ranked (best_sent, best_doc) selection; exposed for invariant
    // checks against brute-force rescans.
    std::vector<SelectedPair> select_pairs(const ModelState& model, std::uint64_t count) const;
    ModelState train_with_random_negatives();

private:
    struct TrainingExample {
        std::size_t item;  // union item index
        int label;
    };

    const CollectionFeatures& features_;
    const QrelsMap& doc_qrels_;
    const QrelsMap& sent_qrels_;
    RunConfig config_;

    SparseVector topic_vector_;
    std::vector<TrainingExample> training_;          // persistent, excludes topic vector
    std::unordered_set<std::size_t> training_items_; // union indices in training_
    std::vector<std::size_t> output_;                // doc indices, in judgment order
    std::vector<bool> in_output_;                    // per doc index
    std::uint64_t batch_size_ = 1;
    std::uint64_t judged_ = 0;
    std::uint64_t sentences_read_total_ = 0;
    std::uint64_t batch_index_ = 0;
    std::mt19937_64 rng_;

public:
    // Reading model: a presented sentence costs one sentence; a presented
    // document costs sentences up to and including the first relevant one,
    // or every sentence when none is relevant.
    std::uint64_t sentences_to_read(std::size_t doc_index) const;
    bool doc_label(std::size_t doc_index) const;
    bool sent_label(std::size_t sent_item) const;
};

std::uint64_t next_batch_size(std::uint64_t b);  // b + ceil(b/10)

// Stable per-(topic, strategy) seed derivation from a manifest seed.
std::uint64_t derive_seed(std::uint64_t base, const std::string& topic,
                          const std::string& strategy);

}  // namespace calsim
