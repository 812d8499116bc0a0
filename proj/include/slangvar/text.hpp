#ifndef SLANGVAR_TEXT_HPP
#define SLANGVAR_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace slangvar {

// Splits on whitespace and ASCII punctuation; bytes outside ASCII are kept
// inside tokens. Case is preserved.
std::vector<std::string> tokenize(std::string_view text);

// ASCII lowercase.
std::string lowercase(std::string_view text);

}  // namespace slangvar

#endif
