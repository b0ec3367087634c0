#include "calsim/tokenizer.hpp"

#include "calsim/porter.hpp"

namespace calsim {
namespace {

inline bool is_word_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (is_word_char(c)) {
            if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
            cur.push_back(static_cast<char>(c));
        } else if (!cur.empty()) {
            tokens.push_back(porter_stem(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(porter_stem(cur));
    return tokens;
}

}  // namespace calsim
