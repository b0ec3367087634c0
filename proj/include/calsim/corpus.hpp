#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace calsim {

// Half-open [char_start, char_end) slice of the parent document's text.
struct SentenceSpan {
    std::size_t char_start = 0;
    std::size_t char_end = 0;

    bool operator==(const SentenceSpan&) const = default;
};

struct Document {
    std::string doc_id;
    std::string text;
    std::vector<SentenceSpan> sentences;  // tile the text, ascending offsets

    std::string_view sentence_text(std::size_t idx) const {
        const auto& s = sentences.at(idx);
        return std::string_view(text).substr(s.char_start, s.char_end - s.char_start);
    }
};

inline std::string make_sent_id(const std::string& doc_id, std::size_t idx) {
    return doc_id + "#" + std::to_string(idx);
}

// Splits "<doc_id>#<index>"; returns nullopt for plain doc ids.
std::optional<std::pair<std::string, std::size_t>> parse_sent_id(const std::string& id);

struct SegmenterConfig {
    // Terminal punctuation followed by whitespace ends a sentence, unless the
    // preceding token is a listed abbreviation.
    std::string terminals = ".!?";
    std::vector<std::string> abbreviations = {"mr", "mrs", "ms", "dr", "prof",
                                              "st", "vs", "etc", "e.g", "i.e"};
};

// Rule-based splitter. Spans always tile [0, text.size()); degenerate text
// yields a single span.
std::vector<SentenceSpan> segment_sentences(std::string_view text,
                                            const SegmenterConfig& config);

class Collection {
public:
    void add(Document doc);  // throws on duplicate doc_id

    const std::vector<Document>& docs() const { return docs_; }
    std::size_t doc_count() const { return docs_.size(); }
    std::size_t sentence_count() const { return sentence_count_; }
    std::size_t union_size() const { return docs_.size() + sentence_count_; }

    const Document* find(const std::string& doc_id) const;
    const Document& at(const std::string& doc_id) const;  // throws if absent
    std::size_t index_of(const std::string& doc_id) const;

private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::size_t sentence_count_ = 0;
};

// Record stream ingestion: segments each (doc_id, text) record unless spans
// are supplied (pre-segmented path), and validates the tiling invariant.
struct DocRecord {
    std::string doc_id;
    std::string text;
    std::optional<std::vector<SentenceSpan>> spans;  // pre-segmented input
};

Collection ingest_documents(const std::vector<DocRecord>& records,
                            const SegmenterConfig& config);

// File ingestion per the supported layouts:
//  - JSON-lines records {"id": str, "text": str}, optionally with
//    "sentences": [{"start": int, "end": int}] for pre-segmented input, or
//  - a directory of <doc_id>.txt plain-text files.
Collection load_collection(const std::string& path, const SegmenterConfig& config);

void save_collection_jsonl(const Collection& coll, const std::string& path);

}  // namespace calsim
