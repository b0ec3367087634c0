#pragma once

#include <string>

namespace calsim {

// Porter (1980) suffix-stripping stemmer. Input is expected to be lowercase;
// characters outside [a-z] pass through untouched.
std::string porter_stem(const std::string& word);

}  // namespace calsim
