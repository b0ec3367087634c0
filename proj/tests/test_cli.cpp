// End-to-end tests of the command-line binary: prepare, label-sentences,
// run and eval over a tiny planted-vocabulary corpus, plus exit codes.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "calsim_cli_test";

int run_cli(const std::string& args) {
    std::string cmd = std::string(CLI_BINARY) + " " + args + " >" +
                      (kRoot / "stdout.txt").string() + " 2>" +
                      (kRoot / "stderr.txt").string();
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    out << body;
}

// Twelve documents and two topics, each with planted first sentences.
void make_fixture() {
    fs::remove_all(kRoot);
    fs::create_directories(kRoot / "docs");
    const char* filler[] = {"red green blue", "green blue gray", "blue gray red",
                            "gray red green"};
    std::string doc_qrels, passages;
    for (int i = 0; i < 12; ++i) {
        std::string id = "doc" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        bool rel1 = i % 3 == 0;                      // doc00, doc03, doc06, doc09
        bool rel2 = i == 1 || i == 5 || i == 7;      // disjoint from topic 1
        std::string text;
        if (rel1) text += "q1z q2z q3z q4z. ";
        if (rel2) text += "p1z p2z p3z p4z. ";
        text += std::string(filler[i % 4]) + ". " + filler[(i + 1) % 4] + ".";
        write_file(kRoot / "docs" / (id + ".txt"), text);
        doc_qrels += "t1 0 " + id + " " + (rel1 ? "1" : "0") + "\n";
        doc_qrels += "t2 0 " + id + " " + (rel2 ? "1" : "0") + "\n";
        if (rel1) passages += "t1 " + id + " 0 3\n";
        if (rel2) passages += "t2 " + id + " 0 3\n";
    }
    write_file(kRoot / "doc_qrels.txt", doc_qrels);
    write_file(kRoot / "passages.txt", passages);
    write_file(kRoot / "topics.jsonl",
               "{\"topic\": \"t1\", \"statement\": \"q1z q2z q3z q4z\"}\n"
               "{\"topic\": \"t2\", \"statement\": \"p1z p2z p3z p4z\"}\n");
}

}  // namespace

TEST_CASE("prepare, label-sentences, run and eval round trip") {
    make_fixture();

    // prepare from a directory of .txt files
    CHECK(run_cli("prepare --collection " + (kRoot / "docs").string() + " --out " +
                  (kRoot / "store").string()) == 0);
    CHECK(fs::exists(kRoot / "store" / "collection.jsonl"));
    CHECK(fs::exists(kRoot / "store" / "vocabulary.tsv"));

    // derive sentence qrels from passage judgments
    CHECK(run_cli("label-sentences --collection " +
                  (kRoot / "store" / "collection.jsonl").string() + " --passages " +
                  (kRoot / "passages.txt").string() + " --doc-qrels " +
                  (kRoot / "doc_qrels.txt").string() + " --out " +
                  (kRoot / "sent_qrels.txt").string()) == 0);
    std::string sq = read_file(kRoot / "sent_qrels.txt");
    CHECK(sq.find("doc00#0 1") != std::string::npos);
    CHECK(sq.find("doc00#1 0") != std::string::npos);

    // prepare again with qrels to get label statistics
    CHECK(run_cli("prepare --collection " + (kRoot / "docs").string() + " --doc-qrels " +
                  (kRoot / "doc_qrels.txt").string() + " --sent-qrels " +
                  (kRoot / "sent_qrels.txt").string() + " --out " +
                  (kRoot / "store").string()) == 0);
    CHECK(fs::exists(kRoot / "store" / "stats.csv"));

    // run two strategies with a small absolute budget
    std::string run_args = "run --store " + (kRoot / "store").string() + " --topics " +
                           (kRoot / "topics.jsonl").string() + " --doc-qrels " +
                           (kRoot / "doc_qrels.txt").string() + " --sent-qrels " +
                           (kRoot / "sent_qrels.txt").string() +
                           " --strategies ddd sdd --seed 5 --budget 3 --iterations 2000";
    CHECK(run_cli(run_args + " --out " + (kRoot / "runs").string()) == 0);
    CHECK(fs::exists(kRoot / "runs" / "manifest.json"));
    for (const char* code : {"ddd", "sdd"}) {
        fs::path log = kRoot / "runs" / (std::string("t1_") + code + ".tsv");
        REQUIRE(fs::exists(log));
        std::string body = read_file(log);
        // header comment plus column header plus three assessments
        CHECK(std::count(body.begin(), body.end(), '\n') == 5);
    }

    // same base seed: byte-identical logs
    CHECK(run_cli(run_args + " --out " + (kRoot / "runs2").string()) == 0);
    CHECK(read_file(kRoot / "runs" / "t1_ddd.tsv") ==
          read_file(kRoot / "runs2" / "t1_ddd.tsv"));
    CHECK(read_file(kRoot / "runs" / "t1_sdd.tsv") ==
          read_file(kRoot / "runs2" / "t1_sdd.tsv"));

    // eval the logs: recall tables, a comparison sweep and gain curves
    CHECK(run_cli("eval --logs " + (kRoot / "runs").string() + " --doc-qrels " +
                  (kRoot / "doc_qrels.txt").string() + " --out " +
                  (kRoot / "reports").string() +
                  " --a 1 --b 0 --pairs ddd:sdd --lambda-grid 0,0.5,1 --gain-curves") == 0);
    CHECK(fs::exists(kRoot / "reports" / "recall_1R.csv"));
    CHECK(fs::exists(kRoot / "reports" / "sweep_ddd_sdd_1R.csv"));
    CHECK(fs::exists(kRoot / "reports" / "gain_t1_ddd_l0.00.csv"));
    CHECK(fs::exists(kRoot / "reports" / "gain_t1_sdd_l1.00.csv"));
    std::string recall = read_file(kRoot / "reports" / "recall_1R.csv");
    CHECK(recall.find("t1") != std::string::npos);
}

TEST_CASE("run settings can come from a manifest file") {
    make_fixture();
    REQUIRE(run_cli("prepare --collection " + (kRoot / "docs").string() + " --out " +
                    (kRoot / "store").string()) == 0);
    REQUIRE(run_cli("label-sentences --collection " +
                    (kRoot / "store" / "collection.jsonl").string() + " --passages " +
                    (kRoot / "passages.txt").string() + " --out " +
                    (kRoot / "sent_qrels.txt").string()) == 0);
    std::ostringstream m;
    m << "{\n"
      << "  \"store\": \"" << (kRoot / "store").string() << "\",\n"
      << "  \"topics\": \"" << (kRoot / "topics.jsonl").string() << "\",\n"
      << "  \"doc_qrels\": \"" << (kRoot / "doc_qrels.txt").string() << "\",\n"
      << "  \"sent_qrels\": \"" << (kRoot / "sent_qrels.txt").string() << "\",\n"
      << "  \"strategies\": [\"dds\"],\n"
      << "  \"seed\": 9,\n"
      << "  \"budget\": \"1R\",\n"
      << "  \"iterations\": 2000,\n"
      << "  \"out\": \"" << (kRoot / "mruns").string() << "\"\n"
      << "}\n";
    write_file(kRoot / "manifest.json", m.str());
    CHECK(run_cli("run --manifest " + (kRoot / "manifest.json").string()) == 0);
    fs::path log = kRoot / "mruns" / "t1_dds.tsv";
    REQUIRE(fs::exists(log));
    CHECK(std::count_if(fs::directory_iterator(kRoot / "mruns"), fs::directory_iterator{},
                        [](const auto& e) { return e.path().extension() == ".tsv"; }) == 2);
    // budget 1R with R=4 relevant documents -> four assessments
    std::string body = read_file(log);
    CHECK(std::count(body.begin(), body.end(), '\n') == 6);
}

TEST_CASE("usage errors exit 1, data errors exit 2") {
    make_fixture();
    CHECK(run_cli("") == 1);                       // missing subcommand
    CHECK(run_cli("prepare") == 1);                // missing required options
    CHECK(run_cli("bogus-subcommand") == 1);
    CHECK(run_cli("eval --logs x --doc-qrels y") == 1);  // missing --out
    CHECK(run_cli("run --store s --topics t") == 1);     // incomplete run settings
    CHECK(run_cli("prepare --collection " + (kRoot / "missing").string() + " --out " +
                  (kRoot / "store2").string()) == 2);
    CHECK(run_cli("label-sentences --collection " + (kRoot / "missing.jsonl").string() +
                  " --passages " + (kRoot / "passages.txt").string() + " --out " +
                  (kRoot / "sq.txt").string()) == 2);
    // strategy codes are validated before any work happens
    REQUIRE(run_cli("prepare --collection " + (kRoot / "docs").string() + " --out " +
                    (kRoot / "store").string()) == 0);
    CHECK(run_cli("run --store " + (kRoot / "store").string() + " --topics " +
                  (kRoot / "topics.jsonl").string() + " --doc-qrels " +
                  (kRoot / "doc_qrels.txt").string() + " --sent-qrels " +
                  (kRoot / "doc_qrels.txt").string() +
                  " --strategies zzz --budget 3 --out " + (kRoot / "r").string()) == 1);
}
