#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "calsim/corpus.hpp"

namespace calsim {

enum class Granularity { document, sentence };

// Binary relevance labels, topic -> item id -> label. Document-granularity
// entries hold doc_ids, sentence-granularity entries hold sent_ids. Unjudged
// items are treated as non-relevant.
class QrelsMap {
public:
    explicit QrelsMap(Granularity g) : granularity_(g) {}

    Granularity granularity() const { return granularity_; }

    void set(const std::string& topic, const std::string& item, bool relevant) {
        entries_[topic][item] = relevant;
    }

    bool is_relevant(const std::string& topic, const std::string& item) const {
        auto t = entries_.find(topic);
        if (t == entries_.end()) return false;
        auto it = t->second.find(item);
        return it != t->second.end() && it->second;
    }

    bool is_judged(const std::string& topic, const std::string& item) const {
        auto t = entries_.find(topic);
        return t != entries_.end() && t->second.contains(item);
    }

    std::size_t relevant_count(const std::string& topic) const {
        auto t = entries_.find(topic);
        if (t == entries_.end()) return 0;
        std::size_t n = 0;
        for (const auto& [item, rel] : t->second) n += rel ? 1 : 0;
        return n;
    }

    std::vector<std::string> topics() const {
        std::vector<std::string> out;
        for (const auto& [t, m] : entries_) out.push_back(t);
        return out;
    }

    const std::map<std::string, std::unordered_map<std::string, bool>>& entries() const {
        return entries_;
    }

private:
    Granularity granularity_;
    std::map<std::string, std::unordered_map<std::string, bool>> entries_;
};

struct PassageJudgment {
    std::string topic_id;
    std::string doc_id;
    std::size_t char_start = 0;
    std::size_t char_end = 0;  // half-open
};

// TREC 4-column qrels: "topic ignored doc_id grade"; grade > 0 is relevant.
QrelsMap load_qrels(const std::string& path, Granularity granularity);
void save_qrels(const QrelsMap& qrels, const std::string& path);

// 4-column passage judgments: "topic doc_id start end".
std::vector<PassageJudgment> load_passages(const std::string& path);

// Labels a sentence relevant iff its half-open span intersects a relevant
// passage of the same topic and document; every other sentence of a
// passage-judged document is labeled non-relevant. Offsets beyond the
// document are clamped with a warning.
QrelsMap derive_sentence_qrels_from_passages(const std::vector<PassageJudgment>& passages,
                                             const Collection& docs);

// Marks every sentence of a non-relevant or unjudged document non-relevant
// for each topic in doc_qrels. An existing relevant sentence label inside a
// non-relevant document is an inconsistency and raises an error.
void propagate_nonrelevant(const QrelsMap& doc_qrels, const Collection& docs,
                           QrelsMap& sent_qrels);

struct LabelStats {
    std::string topic;  // "ALL" for the micro-averaged row
    double sentences_per_doc = 0.0;
    double sentences_per_relevant_doc = 0.0;
    double relevant_sentences_per_relevant_doc = 0.0;
    double mean_first_relevant_position = 0.0;  // 1-based
    double fraction_with_relevant_sentence = 0.0;
    std::vector<std::size_t> first_position_histogram;  // index 0 -> position 1
};

std::vector<LabelStats> corpus_stats(const Collection& docs, const QrelsMap& doc_qrels,
                                     const QrelsMap& sent_qrels);

void save_stats_csv(const std::vector<LabelStats>& stats, const std::string& path);

}  // namespace calsim
