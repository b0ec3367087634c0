#include "calsim/qrels.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace calsim {

QrelsMap load_qrels(const std::string& path, Granularity granularity) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open qrels file: " + path);
    QrelsMap qrels(granularity);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string topic, ignored, item;
        long grade;
        if (!(ss >> topic >> ignored >> item >> grade))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": malformed qrels line");
        qrels.set(topic, item, grade > 0);
    }
    return qrels;
}

void save_qrels(const QrelsMap& qrels, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write qrels file: " + path);
    for (const auto& [topic, items] : qrels.entries()) {
        std::vector<std::string> ids;
        ids.reserve(items.size());
        for (const auto& [id, rel] : items) ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        for (const auto& id : ids)
            out << topic << " 0 " << id << " " << (items.at(id) ? 1 : 0) << "\n";
    }
}

std::vector<PassageJudgment> load_passages(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open passage file: " + path);
    std::vector<PassageJudgment> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        PassageJudgment p;
        if (!(ss >> p.topic_id >> p.doc_id >> p.char_start >> p.char_end) ||
            p.char_end <= p.char_start)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": malformed passage line");
        out.push_back(std::move(p));
    }
    return out;
}

QrelsMap derive_sentence_qrels_from_passages(const std::vector<PassageJudgment>& passages,
                                             const Collection& docs) {
    QrelsMap qrels(Granularity::sentence);
    // Every sentence of a passage-judged document starts non-relevant.
    for (const auto& p : passages) {
        const Document& doc = docs.at(p.doc_id);
        for (std::size_t i = 0; i < doc.sentences.size(); ++i)
            if (!qrels.is_judged(p.topic_id, make_sent_id(p.doc_id, i)))
                qrels.set(p.topic_id, make_sent_id(p.doc_id, i), false);
    }
    for (const auto& p : passages) {
        const Document& doc = docs.at(p.doc_id);
        std::size_t start = p.char_start;
        std::size_t end = p.char_end;
        if (end > doc.text.size()) {
            std::cerr << "warning: passage [" << start << "," << end << ") exceeds "
                      << p.doc_id << " length " << doc.text.size() << ", clamping\n";
            end = doc.text.size();
            start = std::min(start, end);
        }
        for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
            const auto& s = doc.sentences[i];
            // nonempty intersection of half-open intervals
            if (std::max(s.char_start, start) < std::min(s.char_end, end))
                qrels.set(p.topic_id, make_sent_id(p.doc_id, i), true);
        }
    }
    return qrels;
}

void propagate_nonrelevant(const QrelsMap& doc_qrels, const Collection& docs,
                           QrelsMap& sent_qrels) {
    if (doc_qrels.granularity() != Granularity::document)
        throw std::runtime_error("propagate_nonrelevant expects document qrels");
    for (const auto& topic : doc_qrels.topics()) {
        for (const auto& doc : docs.docs()) {
            if (doc_qrels.is_relevant(topic, doc.doc_id)) continue;
            for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
                std::string sid = make_sent_id(doc.doc_id, i);
                if (sent_qrels.is_relevant(topic, sid))
                    throw std::runtime_error("inconsistent labels: relevant sentence " + sid +
                                             " inside non-relevant document (topic " + topic +
                                             ")");
                sent_qrels.set(topic, sid, false);
            }
        }
    }
}

std::vector<LabelStats> corpus_stats(const Collection& docs, const QrelsMap& doc_qrels,
                                     const QrelsMap& sent_qrels) {
    std::vector<LabelStats> out;
    std::vector<std::string> topics = doc_qrels.topics();

    LabelStats all;
    all.topic = "ALL";
    std::size_t all_rel_docs = 0, all_rel_doc_sents = 0, all_rel_sents = 0;
    std::size_t all_first_sum = 0, all_with_rel = 0;

    for (const auto& topic : topics) {
        LabelStats st;
        st.topic = topic;
        std::size_t rel_docs = 0, rel_doc_sents = 0, rel_sents = 0;
        std::size_t first_sum = 0, with_rel = 0;
        for (const auto& doc : docs.docs()) {
            if (!doc_qrels.is_relevant(topic, doc.doc_id)) continue;
            ++rel_docs;
            rel_doc_sents += doc.sentences.size();
            std::size_t first_pos = 0;  // 1-based, 0 = none
            for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
                if (sent_qrels.is_relevant(topic, make_sent_id(doc.doc_id, i))) {
                    ++rel_sents;
                    if (first_pos == 0) first_pos = i + 1;
                }
            }
            if (first_pos > 0) {
                ++with_rel;
                first_sum += first_pos;
                if (st.first_position_histogram.size() < first_pos)
                    st.first_position_histogram.resize(first_pos, 0);
                ++st.first_position_histogram[first_pos - 1];
            }
        }
        st.sentences_per_doc =
            docs.doc_count() ? double(docs.sentence_count()) / double(docs.doc_count()) : 0.0;
        st.sentences_per_relevant_doc = rel_docs ? double(rel_doc_sents) / double(rel_docs) : 0.0;
        st.relevant_sentences_per_relevant_doc =
            rel_docs ? double(rel_sents) / double(rel_docs) : 0.0;
        st.mean_first_relevant_position = with_rel ? double(first_sum) / double(with_rel) : 0.0;
        st.fraction_with_relevant_sentence = rel_docs ? double(with_rel) / double(rel_docs) : 0.0;
        out.push_back(st);

        all_rel_docs += rel_docs;
        all_rel_doc_sents += rel_doc_sents;
        all_rel_sents += rel_sents;
        all_first_sum += first_sum;
        all_with_rel += with_rel;
        if (all.first_position_histogram.size() < st.first_position_histogram.size())
            all.first_position_histogram.resize(st.first_position_histogram.size(), 0);
        for (std::size_t i = 0; i < st.first_position_histogram.size(); ++i)
            all.first_position_histogram[i] += st.first_position_histogram[i];
    }

    all.sentences_per_doc =
        docs.doc_count() ? double(docs.sentence_count()) / double(docs.doc_count()) : 0.0;
    all.sentences_per_relevant_doc =
        all_rel_docs ? double(all_rel_doc_sents) / double(all_rel_docs) : 0.0;
    all.relevant_sentences_per_relevant_doc =
        all_rel_docs ? double(all_rel_sents) / double(all_rel_docs) : 0.0;
    all.mean_first_relevant_position =
        all_with_rel ? double(all_first_sum) / double(all_with_rel) : 0.0;
    all.fraction_with_relevant_sentence =
        all_rel_docs ? double(all_with_rel) / double(all_rel_docs) : 0.0;
    out.push_back(all);
    return out;
}

void save_stats_csv(const std::vector<LabelStats>& stats, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write stats file: " + path);
    out << "topic,sentences_per_doc,sentences_per_relevant_doc,"
           "relevant_sentences_per_relevant_doc,mean_first_relevant_position,"
           "fraction_with_relevant_sentence\n";
    for (const auto& st : stats)
        out << st.topic << "," << st.sentences_per_doc << "," << st.sentences_per_relevant_doc
            << "," << st.relevant_sentences_per_relevant_doc << ","
            << st.mean_first_relevant_position << "," << st.fraction_with_relevant_sentence
            << "\n";
}

}  // namespace calsim
