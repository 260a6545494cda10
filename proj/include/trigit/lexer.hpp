#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "trigit/token.hpp"

namespace trigit {

// Splits `source` into tokens with attached leading trivia. The returned
// stream ends with an EndOfFile sentinel; concatenating every token's trivia
// and text reproduces `source` byte for byte. Throws LexError on unterminated
// strings/comments and illegal characters.
std::vector<Token> tokenize(std::string_view source, const std::string& file);

bool isJavaKeyword(std::string_view word);

}  // namespace trigit
