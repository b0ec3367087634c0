#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace calsim {

// Splits text into maximal runs of alphanumeric characters (bytes >= 0x80
// are treated as word characters so multi-byte UTF-8 sequences stay intact),
// lowercases, and applies the Porter stemmer.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace calsim
