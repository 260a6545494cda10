#pragma once

#include <span>
#include <string>
#include <vector>

#include "trigit/ast.hpp"

namespace trigit {

// A byte-span replacement against the original source of one file.
// Zero-width spans are insertions.
struct TextEdit {
  Span span;
  std::string replacement;
};

// Reconstructs the source text from the token stream: trivia + text of every
// token in order. Byte-identical to the lexer input.
std::string sourceOfUnit(const CompilationUnit& unit);

// Prints the unit, splicing in `edits` (non-overlapping, any order).
// With no edits this is the byte-exact identity.
std::string printUnit(const CompilationUnit& unit, std::span<const TextEdit> edits = {});

// Applies edits to arbitrary text. Throws std::invalid_argument on overlap.
std::string applyTextEdits(const std::string& text, std::span<const TextEdit> edits);

// Canonical rendering of an expression subtree: single spaces around "&&"/"||",
// none elsewhere, parentheses only where precedence demands them.
std::string renderExpr(const AstNode& expr);

}  // namespace trigit
