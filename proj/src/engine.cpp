#include "calsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace calsim {

StrategyCode StrategyCode::parse(const std::string& code) {
    if (code.size() != 3 || code.find_first_not_of("ds") != std::string::npos)
        throw std::invalid_argument("strategy code must match [ds]{3}: " + code);
    return {static_cast<Level>(code[0]), static_cast<Level>(code[1]),
            static_cast<Level>(code[2])};
}

std::string StrategyCode::str() const {
    return {static_cast<char>(present), static_cast<char>(train_granularity),
            static_cast<char>(select)};
}

Budget Budget::parse(const std::string& expr) {
    std::string s;
    for (char c : expr)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty budget expression");
    auto rpos = s.find_first_of("Rr");
    Budget b;
    try {
        if (rpos == std::string::npos) {
            std::size_t used = 0;
            b.b = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return b;
        }
        b.a = rpos == 0 ? 1.0 : std::stod(s.substr(0, rpos));
        std::string rest = s.substr(rpos + 1);
        if (!rest.empty()) {
            if (rest[0] != '+' && rest[0] != '-') throw std::invalid_argument(s);
            b.b = std::stoll(rest);
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("bad budget expression: " + expr);
    }
    return b;
}

std::uint64_t Budget::resolve(std::uint64_t R) const {
    long long v = std::llround(a * double(R)) + b;
    return v > 0 ? static_cast<std::uint64_t>(v) : 0;
}

std::uint64_t next_batch_size(std::uint64_t b) { return b + (b + 9) / 10; }

std::uint64_t derive_seed(std::uint64_t base, const std::string& topic,
                          const std::string& strategy) {
    // FNV-1a over the identifying strings, mixed with the base seed.
    std::uint64_t h = 0xcbf29ce484222325ULL ^ base;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= '/';
        h *= 0x100000001b3ULL;
    };
    mix(topic);
    mix(strategy);
    return h;
}

CalRun::CalRun(const CollectionFeatures& features, const QrelsMap& doc_qrels,
               const QrelsMap& sent_qrels, RunConfig config)
    : features_(features),
      doc_qrels_(doc_qrels),
      sent_qrels_(sent_qrels),
      config_(std::move(config)),
      in_output_(features.doc_count(), false),
      rng_(config_.seed) {
    if (config_.topic_statement.empty())
        throw std::invalid_argument("topic statement must not be empty");
    topic_vector_ = features_.vocab.vectorize(config_.topic_statement, /*normalize=*/true);
}

bool CalRun::done() const {
    return judged_ >= config_.budget || output_.size() >= features_.doc_count();
}

bool CalRun::doc_label(std::size_t doc_index) const {
    return doc_qrels_.is_relevant(config_.topic_id,
                                  features_.coll->docs()[doc_index].doc_id);
}

bool CalRun::sent_label(std::size_t sent_item) const {
    return sent_qrels_.is_relevant(config_.topic_id, features_.item_ids[sent_item]);
}

std::uint64_t CalRun::sentences_to_read(std::size_t doc_index) const {
    const auto& sent_items = features_.doc_sentence_items[doc_index];
    for (std::size_t i = 0; i < sent_items.size(); ++i)
        if (sent_label(sent_items[i])) return i + 1;
    return sent_items.size();  // no relevant sentence: the whole document is read
}

ModelState CalRun::train_with_random_negatives() {
    std::vector<LabeledExample> examples;
    examples.reserve(training_.size() + config_.random_negatives + 1);
    examples.push_back({topic_vector_, +1});
    for (const auto& ex : training_)
        examples.push_back({features_.item_vectors[ex.item], ex.label});

    // Temporary negatives: documents or sentences per the training
    // granularity, excluding items already in the persistent training set.
    std::size_t lo = 0, hi = 0;
    if (config_.strategy.train_granularity == Level::document) {
        lo = 0;
        hi = features_.doc_count();
    } else {
        lo = features_.doc_count();
        hi = features_.size();
    }
    std::size_t pool = hi - lo;
    std::size_t excluded = 0;
    for (std::size_t item : training_items_)
        if (item >= lo && item < hi) ++excluded;
    std::size_t eligible = pool - excluded;
    std::size_t want = std::min(config_.random_negatives, eligible);
    if (want < config_.random_negatives)
        std::cerr << "warning: only " << eligible << " items eligible as random negatives\n";

    std::unordered_set<std::size_t> picked;
    if (want == eligible) {
        for (std::size_t item = lo; item < hi; ++item)
            if (!training_items_.contains(item)) picked.insert(item);
    } else {
        while (picked.size() < want) {
            std::size_t item = lo + static_cast<std::size_t>(rng_() % pool);
            if (training_items_.contains(item)) continue;
            picked.insert(item);
        }
    }
    std::vector<std::size_t> negatives(picked.begin(), picked.end());
    std::sort(negatives.begin(), negatives.end());
    for (std::size_t item : negatives)
        examples.push_back({features_.item_vectors[item], -1});

    TrainParams params = config_.train_params;
    params.seed = config_.seed + 0x9e3779b97f4a7c15ULL * (batch_index_ + 1);
    return train(examples, params, features_.vocab.size());
}

std::vector<SelectedPair> CalRun::select_pairs(const ModelState& model,
                                               std::uint64_t count) const {
    std::vector<const SparseVector*> ptrs;
    ptrs.reserve(features_.size());
    for (const auto& v : features_.item_vectors) ptrs.push_back(&v);
    std::vector<double> scores = score_all(model, ptrs, config_.score_threads);

    auto id_less = [&](std::size_t a, std::size_t b) {
        return features_.item_ids[a] < features_.item_ids[b];
    };
    auto better = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return id_less(a, b);  // ties break by ascending item id
    };

    std::vector<SelectedPair> pairs;
    if (config_.strategy.select == Level::document) {
        std::vector<std::size_t> docs;
        for (std::size_t d = 0; d < features_.doc_count(); ++d)
            if (!in_output_[d]) docs.push_back(features_.doc_item[d]);
        std::sort(docs.begin(), docs.end(), better);
        if (docs.size() > count) docs.resize(count);
        for (std::size_t doc_item : docs) {
            std::size_t d = features_.item_parent[doc_item];
            const auto& sent_items = features_.doc_sentence_items[d];
            std::size_t best = sent_items.front();
            for (std::size_t s : sent_items)
                if (better(s, best)) best = s;
            pairs.push_back({best, doc_item});
        }
    } else {
        std::vector<std::size_t> sents;
        for (std::size_t item = features_.doc_count(); item < features_.size(); ++item)
            if (!in_output_[features_.item_parent[item]]) sents.push_back(item);
        std::sort(sents.begin(), sents.end(), better);
        std::unordered_set<std::size_t> emitted;
        for (std::size_t s : sents) {
            if (pairs.size() >= count) break;
            std::size_t d = features_.item_parent[s];
            if (emitted.contains(d)) continue;  // one pair per document per batch
            emitted.insert(d);
            pairs.push_back({s, features_.doc_item[d]});
        }
    }
    return pairs;
}

std::vector<AssessmentRecord> CalRun::step_batch() {
    if (done()) return {};
    ++batch_index_;
    ModelState model = train_with_random_negatives();

    std::uint64_t remaining = config_.budget - judged_;
    std::uint64_t take = std::min<std::uint64_t>(batch_size_, remaining);
    std::vector<SelectedPair> pairs = select_pairs(model, take);

    // All selected documents enter the system output before any assessment.
    for (const auto& p : pairs) {
        std::size_t d = features_.item_parent[p.doc_item];
        if (in_output_[d])
            throw std::logic_error("document selected twice: " + features_.item_ids[p.doc_item]);
        in_output_[d] = true;
        output_.push_back(d);
    }

    std::vector<AssessmentRecord> records;
    records.reserve(pairs.size());
    for (const auto& p : pairs) {
        std::size_t d = features_.item_parent[p.doc_item];
        AssessmentRecord rec;
        rec.batch_index = batch_index_;
        rec.doc_id = features_.item_ids[p.doc_item];
        if (config_.strategy.present == Level::sentence) {
            rec.presented_item = features_.item_ids[p.sent_item];
            rec.relevant = sent_label(p.sent_item);
            rec.sentences_read = 1;
        } else {
            rec.presented_item = rec.doc_id;
            rec.relevant = doc_label(d);
            rec.sentences_read = sentences_to_read(d);
        }
        ++judged_;
        sentences_read_total_ += rec.sentences_read;
        rec.ordinal = judged_;
        rec.cum_judge = judged_;
        rec.cum_sent = sentences_read_total_;

        std::size_t train_item = config_.strategy.train_granularity == Level::sentence
                                     ? p.sent_item
                                     : p.doc_item;
        training_.push_back({train_item, rec.relevant ? +1 : -1});
        training_items_.insert(train_item);
        records.push_back(std::move(rec));
    }

    batch_size_ = next_batch_size(batch_size_);
    return records;
}

RunLog CalRun::run() {
    RunLog log;
    log.topic = config_.topic_id;
    log.strategy = config_.strategy.str();
    log.seed = config_.seed;
    while (!done()) {
        auto records = step_batch();
        if (records.empty()) break;  // no eligible items remain
        log.records.insert(log.records.end(), records.begin(), records.end());
    }
    return log;
}

void RunLog::save_tsv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write run log: " + path);
    out << "# topic\t" << topic << "\tstrategy\t" << strategy << "\tseed\t" << seed << "\n";
    out << "ordinal\tbatch_index\tdoc_id\tpresented_item\tlabel\tsentences_read\t"
           "cum_E_judge\tcum_E_sent\n";
    for (const auto& r : records)
        out << r.ordinal << "\t" << r.batch_index << "\t" << r.doc_id << "\t"
            << r.presented_item << "\t" << (r.relevant ? 1 : 0) << "\t" << r.sentences_read
            << "\t" << r.cum_judge << "\t" << r.cum_sent << "\n";
}

RunLog RunLog::load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open run log: " + path);
    RunLog log;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty run log: " + path);
    {
        std::istringstream ss(line);
        std::string hash, k1, k2, k3;
        if (!(ss >> hash >> k1 >> log.topic >> k2 >> log.strategy >> k3 >> log.seed) ||
            hash != "#")
            throw std::runtime_error("bad run log header in " + path);
    }
    std::getline(in, line);  // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        AssessmentRecord r;
        int label;
        if (!(ss >> r.ordinal >> r.batch_index >> r.doc_id >> r.presented_item >> label >>
              r.sentences_read >> r.cum_judge >> r.cum_sent))
            throw std::runtime_error("malformed run log line in " + path);
        r.relevant = label != 0;
        log.records.push_back(std::move(r));
    }
    return log;
}

}  // namespace calsim
