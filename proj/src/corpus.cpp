#include "calsim/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace calsim {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<std::pair<std::string, std::size_t>> parse_sent_id(const std::string& id) {
    auto pos = id.rfind('#');
    if (pos == std::string::npos) return std::nullopt;
    std::string idx_part = id.substr(pos + 1);
    if (idx_part.empty() ||
        !std::all_of(idx_part.begin(), idx_part.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
        return std::nullopt;
    return std::make_pair(id.substr(0, pos), std::stoul(idx_part));
}

namespace {

bool ends_with_abbreviation(std::string_view text, std::size_t dot_pos,
                            const SegmenterConfig& config) {
    if (text[dot_pos] != '.') return false;
    std::size_t end = dot_pos;
    std::size_t begin = end;
    while (begin > 0) {
        unsigned char c = static_cast<unsigned char>(text[begin - 1]);
        if (std::isalnum(c) || c == '.') --begin;
        else break;
    }
    if (begin == end) return false;
    std::string word(text.substr(begin, end - begin));
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return std::find(config.abbreviations.begin(), config.abbreviations.end(), word) !=
           config.abbreviations.end();
}

}  // namespace

std::vector<SentenceSpan> segment_sentences(std::string_view text,
                                            const SegmenterConfig& config) {
    std::vector<SentenceSpan> spans;
    if (text.empty()) {
        spans.push_back({0, 0});
        return spans;
    }
    std::size_t start = 0;
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (config.terminals.find(text[i]) == std::string::npos) continue;
        if (!std::isspace(static_cast<unsigned char>(text[i + 1]))) continue;
        if (ends_with_abbreviation(text, i, config)) continue;
        spans.push_back({start, i + 1});
        // the following whitespace run belongs to the next sentence
        std::size_t next = i + 1;
        while (next < text.size() && std::isspace(static_cast<unsigned char>(text[next])))
            ++next;
        start = next;
        i = next > 0 ? next - 1 : 0;
    }
    if (start < text.size() || spans.empty()) spans.push_back({start, text.size()});
    else spans.back().char_end = text.size();  // trailing whitespace joins the last span
    return spans;
}

void Collection::add(Document doc) {
    if (by_id_.contains(doc.doc_id))
        throw std::runtime_error("duplicate doc_id: " + doc.doc_id);
    if (doc.sentences.empty())
        throw std::runtime_error("document without sentences: " + doc.doc_id);
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
        const auto& s = doc.sentences[i];
        if (s.char_end < s.char_start || s.char_end > doc.text.size())
            throw std::runtime_error("sentence span out of bounds in " + doc.doc_id);
        if (i > 0 && s.char_start < doc.sentences[i - 1].char_end)
            throw std::runtime_error("overlapping sentence spans in " + doc.doc_id);
    }
    sentence_count_ += doc.sentences.size();
    by_id_.emplace(doc.doc_id, docs_.size());
    docs_.push_back(std::move(doc));
}

const Document* Collection::find(const std::string& doc_id) const {
    auto it = by_id_.find(doc_id);
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

const Document& Collection::at(const std::string& doc_id) const {
    const Document* d = find(doc_id);
    if (!d) throw std::runtime_error("unknown doc_id: " + doc_id);
    return *d;
}

std::size_t Collection::index_of(const std::string& doc_id) const {
    auto it = by_id_.find(doc_id);
    if (it == by_id_.end()) throw std::runtime_error("unknown doc_id: " + doc_id);
    return it->second;
}

Collection ingest_documents(const std::vector<DocRecord>& records,
                            const SegmenterConfig& config) {
    Collection coll;
    for (const auto& rec : records) {
        Document doc;
        doc.doc_id = rec.doc_id;
        doc.text = rec.text;
        if (rec.spans) {
            doc.sentences = *rec.spans;
            if (doc.sentences.empty()) doc.sentences.push_back({0, doc.text.size()});
        } else {
            doc.sentences = segment_sentences(doc.text, config);
        }
        if (doc.text.empty())
            std::cerr << "warning: empty document " << doc.doc_id << "\n";
        coll.add(std::move(doc));
    }
    return coll;
}

namespace {

Collection load_jsonl(const std::string& path, const SegmenterConfig& config) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open collection file: " + path);
    std::vector<DocRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": bad JSON record: " + e.what());
        }
        DocRecord rec;
        rec.doc_id = j.at("id").get<std::string>();
        rec.text = j.value("text", std::string{});
        if (j.contains("sentences")) {
            std::vector<SentenceSpan> spans;
            for (const auto& s : j.at("sentences"))
                spans.push_back({s.at("start").get<std::size_t>(),
                                 s.at("end").get<std::size_t>()});
            rec.spans = std::move(spans);
        }
        records.push_back(std::move(rec));
    }
    return ingest_documents(records, config);
}

Collection load_dir(const std::string& path, const SegmenterConfig& config) {
    std::vector<DocRecord> records;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        records.push_back({f.stem().string(), buf.str(), std::nullopt});
    }
    return ingest_documents(records, config);
}

}  // namespace

Collection load_collection(const std::string& path, const SegmenterConfig& config) {
    if (!fs::exists(path))
        throw std::runtime_error("collection path does not exist: " + path);
    if (fs::is_directory(path)) return load_dir(path, config);
    return load_jsonl(path, config);
}

void save_collection_jsonl(const Collection& coll, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write collection file: " + path);
    for (const auto& doc : coll.docs()) {
        json j;
        j["id"] = doc.doc_id;
        j["text"] = doc.text;
        json spans = json::array();
        for (const auto& s : doc.sentences)
            spans.push_back({{"start", s.char_start}, {"end", s.char_end}});
        j["sentences"] = std::move(spans);
        out << j.dump() << "\n";
    }
}

}  // namespace calsim
