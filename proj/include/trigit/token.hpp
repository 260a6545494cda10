#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "trigit/span.hpp"

namespace trigit {

enum class TokenKind {
  Keyword,
  Identifier,
  StringLiteral,
  NumberLiteral,
  Punctuation,
  AnnotationMarker,  // the '@' introducing an annotation
  EndOfFile,         // sentinel owning file-final trivia; text is empty
};

enum class TriviaKind { Whitespace, LineComment, BlockComment };

// A run of whitespace or one comment preceding a token.
struct TriviaRun {
  TriviaKind kind;
  std::string text;  // exact source bytes, comment delimiters included
  Span span;
};

struct Token {
  TokenKind kind;
  std::string text;  // exact source lexeme (escapes unprocessed)
  Span span;
  std::vector<TriviaRun> leading;

  bool is(TokenKind k) const { return kind == k; }
  bool is(TokenKind k, const std::string& t) const { return kind == k && text == t; }
  bool isKeyword(const std::string& t) const { return is(TokenKind::Keyword, t); }
  bool isPunct(const std::string& t) const { return is(TokenKind::Punctuation, t); }
};

struct LexError : std::runtime_error {
  std::string file;
  int line;
  int column;
  std::string message;

  LexError(std::string file_, int line_, int column_, std::string message_)
      : std::runtime_error(file_ + ":" + std::to_string(line_) + ":" +
                           std::to_string(column_) + ": " + message_),
        file(std::move(file_)), line(line_), column(column_), message(std::move(message_)) {}
};

// Decoded value of a string-literal token (escape sequences processed).
std::string decodeStringLiteral(const std::string& raw);

// Exact source bytes of [first, last] plus the trivia between them.
// `last` is inclusive; tokens must come from one file's stream.
std::string textOfTokenRange(const std::vector<Token>& tokens, std::size_t first,
                             std::size_t last);

}  // namespace trigit
