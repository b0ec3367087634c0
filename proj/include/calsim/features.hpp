#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "calsim/corpus.hpp"
#include "calsim/sparse.hpp"

namespace calsim {

// Term dictionary over the union of documents and sentences. A term is
// retained when its total occurrence count across the collection is at
// least two; df counts union items (documents and sentences alike)
// containing the term, and N is the union size.
class Vocabulary {
public:
    struct TermInfo {
        std::uint32_t id = 0;
        std::uint64_t df = 0;
    };

    static Vocabulary build(const Collection& coll);

    std::size_t size() const { return terms_.size(); }
    std::uint64_t n_items() const { return n_items_; }

    const TermInfo* find(const std::string& term) const {
        auto it = terms_.find(term);
        return it == terms_.end() ? nullptr : &it->second;
    }

    // tf-idf weight (1 + ln tf) * ln(N / df). Natural log: with L2
    // normalization any fixed base yields the same normalized vector.
    double weight(std::uint64_t tf, std::uint64_t df) const;

    SparseVector vectorize(std::string_view text, bool normalize) const;
    SparseVector vectorize(const std::vector<std::string>& tokens, bool normalize) const;

    // TSV round-trip: header "N <count>" then "term term_id df" rows.
    void save_tsv(const std::string& path) const;
    static Vocabulary load_tsv(const std::string& path);

private:
    std::unordered_map<std::string, TermInfo> terms_;
    std::uint64_t n_items_ = 0;
};

// Pre-vectorized union collection shared by all runs over it. Items are
// indexed docs-first: item i < doc_count is document i, the rest are the
// sentences of each document in order.
struct CollectionFeatures {
    const Collection* coll = nullptr;
    Vocabulary vocab;
    std::vector<SparseVector> item_vectors;        // one per union item, L2-normalized
    std::vector<std::string> item_ids;             // doc_id or sent_id
    std::vector<std::size_t> item_parent;          // doc index (self for documents)
    std::vector<std::size_t> doc_item;             // doc index -> item index
    std::vector<std::vector<std::size_t>> doc_sentence_items;  // doc index -> sentence items

    std::size_t doc_count() const { return doc_item.size(); }
    std::size_t size() const { return item_vectors.size(); }
    bool is_document_item(std::size_t item) const { return item < doc_item.size(); }

    static CollectionFeatures build(const Collection& coll);
    static CollectionFeatures build(const Collection& coll, Vocabulary vocab);
};

}  // namespace calsim
