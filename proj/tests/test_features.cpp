#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include "calsim/corpus.hpp"
#include "calsim/features.hpp"
#include "calsim/tokenizer.hpp"

using namespace calsim;

namespace {

Collection make_collection(const std::vector<std::pair<std::string, std::string>>& docs) {
    std::vector<DocRecord> records;
    for (const auto& [id, text] : docs) records.push_back({id, text, std::nullopt});
    return ingest_documents(records, SegmenterConfig{});
}

}  // namespace

TEST_CASE("terms occurring once are excluded, df counts union items") {
    // Documents and sentences are both counted, so a term inside a sentence
    // always totals >= 2. "apple" sits outside d2's only sentence span and
    // therefore occurs exactly once in the whole collection -> dropped.
    std::vector<DocRecord> records;
    records.push_back({"d1", "pear", std::nullopt});
    records.push_back({"d2", "banana again. apple", std::vector<SentenceSpan>{{0, 13}}});
    Collection coll = ingest_documents(records, SegmenterConfig{});
    Vocabulary vocab = Vocabulary::build(coll);
    CHECK(vocab.n_items() == coll.union_size());
    CHECK(vocab.find("appl") == nullptr);
    const auto* pear = vocab.find("pear");
    REQUIRE(pear != nullptr);
    // one single-sentence doc: doc + sentence = 2 occurrences, df=2
    CHECK(pear->df == 2);
    const auto* banana = vocab.find("banana");
    REQUIRE(banana != nullptr);
    CHECK(banana->df == 2);
}

TEST_CASE("empty collection gives empty vocabulary") {
    Collection coll;
    Vocabulary vocab = Vocabulary::build(coll);
    CHECK(vocab.size() == 0);
    CHECK(vocab.n_items() == 0);
}

TEST_CASE("tf-idf weight matches direct evaluation") {
    Collection coll = make_collection({{"d", "x y. x y."}});
    Vocabulary vocab = Vocabulary::build(coll);

    SUBCASE("hand values") {
        double w = (1.0 + std::log(1.0)) * std::log(1000.0 / 10.0);
        CHECK(w == doctest::Approx(4.60517).epsilon(1e-5));
        double w2 = (1.0 + std::log(3.0)) * std::log(4.0 / 2.0);
        CHECK(w2 == doctest::Approx(1.4546473).epsilon(1e-5));
    }

    SUBCASE("df equal to N gives zero weight") {
        // N = 3 (doc + 2 sentences); "x" occurs in all three union items
        CHECK(vocab.n_items() == 3);
        CHECK(vocab.find("x")->df == 3);
        CHECK(vocab.weight(5, 3) == doctest::Approx(0.0));
        SparseVector sv = vocab.vectorize("x", false);
        CHECK(sv.empty());  // zero weights are not materialized
    }
}

TEST_CASE("weight is monotone in tf and antitone in df") {
    Collection coll = make_collection({{"d", "a b. a b. a c. b c."}});
    Vocabulary vocab = Vocabulary::build(coll);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t tf = 1 + rng() % 50;
        std::uint64_t df = 1 + rng() % (vocab.n_items() - 1);
        CHECK(vocab.weight(tf + 1, df) > vocab.weight(tf, df));
        if (df + 1 < vocab.n_items()) CHECK(vocab.weight(tf, df + 1) < vocab.weight(tf, df));
    }
}

TEST_CASE("vectorize is deterministic and drops OOV terms") {
    Collection coll = make_collection(
        {{"d1", "alpha beta. alpha beta."}, {"d2", "other words. other words."}});
    Vocabulary vocab = Vocabulary::build(coll);
    SparseVector a = vocab.vectorize("alpha beta unseen", false);
    SparseVector b = vocab.vectorize("alpha beta unseen", false);
    CHECK(a == b);
    CHECK(a.size() == 2);
    for (std::size_t i = 1; i < a.entries.size(); ++i)
        CHECK(a.entries[i - 1].first < a.entries[i].first);
}

TEST_CASE("normalized vectors have unit norm, zero vector stays zero") {
    Collection coll = make_collection({{"d1", "alpha beta. alpha gamma."}});
    Vocabulary vocab = Vocabulary::build(coll);
    SparseVector v = vocab.vectorize("alpha beta gamma", true);
    CHECK(v.l2_norm() == doctest::Approx(1.0).epsilon(1e-9));
    SparseVector zero = vocab.vectorize("nothing known here!", true);
    CHECK(zero.l2_norm() == doctest::Approx(0.0));
}

TEST_CASE("document token multiset equals union of its sentences") {
    Collection coll = make_collection(
        {{"d", "The quick brown fox. Jumped over the lazy dog. Again and again."}});
    const Document& doc = coll.at("d");
    std::map<std::string, int> doc_counts, sent_counts;
    for (const auto& t : tokenize(doc.text)) ++doc_counts[t];
    for (std::size_t i = 0; i < doc.sentences.size(); ++i)
        for (const auto& t : tokenize(doc.sentence_text(i))) ++sent_counts[t];
    CHECK(doc_counts == sent_counts);
}

TEST_CASE("vocabulary TSV round trip is lossless") {
    Collection coll = make_collection({{"d1", "alpha beta. alpha beta gamma. gamma."}});
    Vocabulary vocab = Vocabulary::build(coll);
    auto path = std::filesystem::temp_directory_path() / "calsim_vocab.tsv";
    vocab.save_tsv(path.string());
    Vocabulary again = Vocabulary::load_tsv(path.string());
    CHECK(again.n_items() == vocab.n_items());
    CHECK(again.size() == vocab.size());
    for (const auto& term : {"alpha", "beta", "gamma"}) {
        const auto* a = vocab.find(term);
        const auto* b = again.find(term);
        REQUIRE(a);
        REQUIRE(b);
        CHECK(a->id == b->id);
        CHECK(a->df == b->df);
    }
    // rerun writes byte-identical output
    auto path2 = std::filesystem::temp_directory_path() / "calsim_vocab2.tsv";
    again.save_tsv(path2.string());
    std::ifstream f1(path), f2(path2);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("collection features index docs first, then sentences in order") {
    Collection coll = make_collection({{"a", "one two. three four."}, {"b", "five six."}});
    CollectionFeatures cf = CollectionFeatures::build(coll);
    REQUIRE(cf.size() == coll.union_size());
    CHECK(cf.doc_count() == 2);
    CHECK(cf.item_ids[0] == "a");
    CHECK(cf.item_ids[1] == "b");
    CHECK(cf.item_ids[2] == "a#0");
    CHECK(cf.item_ids[3] == "a#1");
    CHECK(cf.item_ids[4] == "b#0");
    CHECK(cf.is_document_item(1));
    CHECK(!cf.is_document_item(2));
    CHECK(cf.item_parent[4] == 1);
    for (const auto& v : cf.item_vectors)
        if (!v.empty()) CHECK(v.l2_norm() == doctest::Approx(1.0).epsilon(1e-9));
}
