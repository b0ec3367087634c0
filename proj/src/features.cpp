#include "calsim/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "calsim/tokenizer.hpp"

namespace calsim {

namespace {

// Applies fn to the token list of every union item: each document, then each
// of its sentences.
template <typename Fn>
void for_each_union_item(const Collection& coll, Fn&& fn) {
    for (const auto& doc : coll.docs()) {
        fn(tokenize(doc.text));
        for (std::size_t i = 0; i < doc.sentences.size(); ++i)
            fn(tokenize(doc.sentence_text(i)));
    }
}

}  // namespace

Vocabulary Vocabulary::build(const Collection& coll) {
    // std::map keeps term ids deterministic (sorted term order).
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> counts;  // term -> (total, df)
    for_each_union_item(coll, [&](const std::vector<std::string>& tokens) {
        std::map<std::string, std::uint64_t> local;
        for (const auto& t : tokens) ++local[t];
        for (const auto& [term, tf] : local) {
            auto& c = counts[term];
            c.first += tf;
            c.second += 1;
        }
    });

    Vocabulary vocab;
    vocab.n_items_ = coll.union_size();
    std::uint32_t next_id = 0;
    for (const auto& [term, c] : counts)
        if (c.first >= 2) vocab.terms_.emplace(term, TermInfo{next_id++, c.second});
    return vocab;
}

double Vocabulary::weight(std::uint64_t tf, std::uint64_t df) const {
    if (tf == 0 || df == 0 || n_items_ == 0) return 0.0;
    return (1.0 + std::log(double(tf))) * std::log(double(n_items_) / double(df));
}

SparseVector Vocabulary::vectorize(std::string_view text, bool normalize) const {
    return vectorize(tokenize(text), normalize);
}

SparseVector Vocabulary::vectorize(const std::vector<std::string>& tokens,
                                   bool normalize) const {
    std::map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> tfs;  // id -> (tf, df)
    for (const auto& tok : tokens) {
        const TermInfo* info = find(tok);
        if (!info) continue;  // out-of-vocabulary terms dropped
        auto& e = tfs[info->id];
        ++e.first;
        e.second = info->df;
    }
    SparseVector sv;
    sv.entries.reserve(tfs.size());
    for (const auto& [id, e] : tfs) {
        double w = weight(e.first, e.second);
        if (w != 0.0) sv.entries.emplace_back(id, w);
    }
    if (normalize) sv.l2_normalize();
    return sv;
}

void Vocabulary::save_tsv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write vocabulary file: " + path);
    out << "N\t" << n_items_ << "\n";
    std::vector<std::pair<std::string, TermInfo>> rows(terms_.begin(), terms_.end());
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.second.id < b.second.id; });
    for (const auto& [term, info] : rows)
        out << term << "\t" << info.id << "\t" << info.df << "\n";
}

Vocabulary Vocabulary::load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
    Vocabulary vocab;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty vocabulary file: " + path);
    {
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag >> vocab.n_items_) || tag != "N")
            throw std::runtime_error("bad vocabulary header in " + path);
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string term;
        TermInfo info;
        if (!(ss >> term >> info.id >> info.df))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": malformed vocabulary line");
        vocab.terms_.emplace(std::move(term), info);
    }
    return vocab;
}

CollectionFeatures CollectionFeatures::build(const Collection& coll) {
    return build(coll, Vocabulary::build(coll));
}

CollectionFeatures CollectionFeatures::build(const Collection& coll, Vocabulary vocab) {
    CollectionFeatures cf;
    cf.coll = &coll;
    cf.vocab = std::move(vocab);
    std::size_t n_docs = coll.doc_count();
    cf.item_vectors.reserve(coll.union_size());
    cf.item_ids.reserve(coll.union_size());
    cf.item_parent.reserve(coll.union_size());
    cf.doc_item.resize(n_docs);
    cf.doc_sentence_items.resize(n_docs);

    for (std::size_t d = 0; d < n_docs; ++d) {
        const auto& doc = coll.docs()[d];
        cf.doc_item[d] = cf.item_vectors.size();
        cf.item_vectors.push_back(cf.vocab.vectorize(doc.text, /*normalize=*/true));
        cf.item_ids.push_back(doc.doc_id);
        cf.item_parent.push_back(d);
    }
    for (std::size_t d = 0; d < n_docs; ++d) {
        const auto& doc = coll.docs()[d];
        cf.doc_sentence_items[d].reserve(doc.sentences.size());
        for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
            cf.doc_sentence_items[d].push_back(cf.item_vectors.size());
            cf.item_vectors.push_back(
                cf.vocab.vectorize(doc.sentence_text(i), /*normalize=*/true));
            cf.item_ids.push_back(make_sent_id(doc.doc_id, i));
            cf.item_parent.push_back(d);
        }
    }
    return cf;
}

}  // namespace calsim
