#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "trigit/ast.hpp"

namespace trigit {

struct ParseError : std::runtime_error {
  std::string file;
  int line;
  int column;
  std::string expected;
  std::string found;

  ParseError(std::string file_, int line_, int column_, std::string expected_,
             std::string found_)
      : std::runtime_error(file_ + ":" + std::to_string(line_) + ":" +
                           std::to_string(column_) + ": expected " + expected_ +
                           ", found " + found_),
        file(std::move(file_)), line(line_), column(column_),
        expected(std::move(expected_)), found(std::move(found_)) {}
};

// Parses a full token stream (as produced by tokenize) into a
// CompilationUnit. Fail-fast: the first construct outside the subset raises
// ParseError.
CompilationUnit parseCompilationUnit(std::vector<Token> tokens, const std::string& file);

// Convenience: tokenize + parse.
CompilationUnit parseSource(std::string_view source, const std::string& file);

// Parses a standalone expression (used by tests and by the guard-condition
// machinery); the tokens must cover exactly one expr.
AstNodePtr parseExpression(const std::vector<Token>& tokens, const std::string& file);

}  // namespace trigit
