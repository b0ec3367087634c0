#include <doctest.h>

#include "calsim/porter.hpp"
#include "calsim/tokenizer.hpp"

using namespace calsim;

TEST_CASE("canonical stems") {
    CHECK(porter_stem("caresses") == "caress");
    CHECK(porter_stem("ponies") == "poni");
    CHECK(porter_stem("ties") == "ti");
    CHECK(porter_stem("caress") == "caress");
    CHECK(porter_stem("cats") == "cat");
    CHECK(porter_stem("feed") == "feed");
    CHECK(porter_stem("agreed") == "agre");
    CHECK(porter_stem("plastered") == "plaster");
    CHECK(porter_stem("bled") == "bled");
    CHECK(porter_stem("motoring") == "motor");
    CHECK(porter_stem("sing") == "sing");
    CHECK(porter_stem("conflated") == "conflat");
    CHECK(porter_stem("troubled") == "troubl");
    CHECK(porter_stem("sized") == "size");
    CHECK(porter_stem("hopping") == "hop");
    CHECK(porter_stem("tanned") == "tan");
    CHECK(porter_stem("falling") == "fall");
    CHECK(porter_stem("hissing") == "hiss");
    CHECK(porter_stem("fizzed") == "fizz");
    CHECK(porter_stem("failing") == "fail");
    CHECK(porter_stem("filing") == "file");
    CHECK(porter_stem("happy") == "happi");
    CHECK(porter_stem("sky") == "sky");
}

TEST_CASE("suffix chains, steps 2 through 5") {
    CHECK(porter_stem("relational") == "relat");
    CHECK(porter_stem("conditional") == "condit");
    CHECK(porter_stem("rational") == "ration");
    CHECK(porter_stem("valenci") == "valenc");
    CHECK(porter_stem("digitizer") == "digit");
    CHECK(porter_stem("operator") == "oper");
    CHECK(porter_stem("feudalism") == "feudal");
    CHECK(porter_stem("decisiveness") == "decis");
    CHECK(porter_stem("hopefulness") == "hope");
    CHECK(porter_stem("formaliti") == "formal");
    CHECK(porter_stem("triplicate") == "triplic");
    CHECK(porter_stem("formative") == "form");
    CHECK(porter_stem("formalize") == "formal");
    CHECK(porter_stem("electriciti") == "electr");
    CHECK(porter_stem("electrical") == "electr");
    CHECK(porter_stem("hopeful") == "hope");
    CHECK(porter_stem("goodness") == "good");
    CHECK(porter_stem("revival") == "reviv");
    CHECK(porter_stem("allowance") == "allow");
    CHECK(porter_stem("inference") == "infer");
    CHECK(porter_stem("adjustable") == "adjust");
    CHECK(porter_stem("defensible") == "defens");
    CHECK(porter_stem("replacement") == "replac");
    CHECK(porter_stem("adoption") == "adopt");
    CHECK(porter_stem("communism") == "commun");
    CHECK(porter_stem("activate") == "activ");
    CHECK(porter_stem("effective") == "effect");
    CHECK(porter_stem("bowdlerize") == "bowdler");
    CHECK(porter_stem("probate") == "probat");
    CHECK(porter_stem("rate") == "rate");
    CHECK(porter_stem("cease") == "ceas");
    CHECK(porter_stem("controll") == "control");
    CHECK(porter_stem("roll") == "roll");
}

TEST_CASE("short words and non-alpha pass through") {
    CHECK(porter_stem("a") == "a");
    CHECK(porter_stem("is") == "is");
    CHECK(porter_stem("x7a") == "x7a");
    CHECK(porter_stem("") == "");
}

TEST_CASE("tokenize downcases, splits and stems") {
    CHECK(tokenize("Running runners RUN") ==
          std::vector<std::string>{"run", "runner", "run"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("caresses ponies") == std::vector<std::string>{"caress", "poni"});
    CHECK(tokenize("one,two;three!") == std::vector<std::string>{"on", "two", "three"});
    CHECK(tokenize("abc123 42") == std::vector<std::string>{"abc123", "42"});
}
