#include "trigit/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace trigit {

std::string describe(const Span& s) {
  return std::to_string(s.line) + ":" + std::to_string(s.column);
}

namespace {

const std::unordered_set<std::string_view>& keywordTable() {
  // Full Java reserved-word set plus the literal words; keeping the lexer
  // aware of all of them gives crisp errors when unsupported constructs
  // (while, new, ...) reach the parser.
  static const std::unordered_set<std::string_view> kw = {
      "abstract", "assert",   "boolean",    "break",     "byte",      "case",
      "catch",    "char",     "class",      "const",     "continue",  "default",
      "do",       "double",   "else",       "enum",      "extends",   "final",
      "finally",  "float",    "for",        "goto",      "if",        "implements",
      "import",   "instanceof", "int",      "interface", "long",      "native",
      "new",      "package",  "private",    "protected", "public",    "return",
      "short",    "static",   "strictfp",   "super",     "switch",    "synchronized",
      "this",     "throw",    "throws",     "transient", "try",       "void",
      "volatile", "while",    "true",       "false",     "null",
  };
  return kw;
}

bool isIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool isIdentPart(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool isDigit(char c) { return c >= '0' && c <= '9'; }

struct Cursor {
  std::string_view src;
  const std::string& file;
  std::size_t pos = 0;
  int line = 1;
  int column = 1;

  bool atEnd() const { return pos >= src.size(); }
  char peek(std::size_t off = 0) const {
    return pos + off < src.size() ? src[pos + off] : '\0';
  }
  void advance() {
    if (src[pos] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw LexError(file, line, column, msg);
  }
};

}  // namespace

bool isJavaKeyword(std::string_view word) { return keywordTable().count(word) != 0; }

std::string decodeStringLiteral(const std::string& raw) {
  // raw includes the surrounding quotes.
  std::string out;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    char c = raw[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    ++i;
    switch (raw[i]) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case '0': out.push_back('\0'); break;
      case '\'': out.push_back('\''); break;
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      default:
        out.push_back('\\');
        out.push_back(raw[i]);
        break;
    }
  }
  return out;
}

std::string textOfTokenRange(const std::vector<Token>& tokens, std::size_t first,
                             std::size_t last) {
  std::string out;
  for (std::size_t i = first; i <= last && i < tokens.size(); ++i) {
    if (i != first) {
      for (const TriviaRun& run : tokens[i].leading) out += run.text;
    }
    out += tokens[i].text;
  }
  return out;
}

std::vector<Token> tokenize(std::string_view source, const std::string& file) {
  Cursor cur{source, file};
  std::vector<Token> tokens;
  std::vector<TriviaRun> pending;

  auto beginSpan = [&]() {
    Span s;
    s.line = cur.line;
    s.column = cur.column;
    s.begin = cur.pos;
    return s;
  };
  auto closeSpan = [&](Span& s) {
    s.endLine = cur.line;
    s.endColumn = cur.column;
    s.end = cur.pos;
  };

  auto collectTrivia = [&]() {
    while (!cur.atEnd()) {
      char c = cur.peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        Span s = beginSpan();
        while (!cur.atEnd()) {
          char w = cur.peek();
          if (w != ' ' && w != '\t' && w != '\r' && w != '\n') break;
          cur.advance();
        }
        closeSpan(s);
        pending.push_back({TriviaKind::Whitespace,
                           std::string(source.substr(s.begin, s.end - s.begin)), s});
      } else if (c == '/' && cur.peek(1) == '/') {
        Span s = beginSpan();
        while (!cur.atEnd() && cur.peek() != '\n') cur.advance();
        closeSpan(s);
        pending.push_back({TriviaKind::LineComment,
                           std::string(source.substr(s.begin, s.end - s.begin)), s});
      } else if (c == '/' && cur.peek(1) == '*') {
        Span s = beginSpan();
        cur.advance();
        cur.advance();
        bool closed = false;
        while (!cur.atEnd()) {
          if (cur.peek() == '*' && cur.peek(1) == '/') {
            cur.advance();
            cur.advance();
            closed = true;
            break;
          }
          cur.advance();
        }
        if (!closed) throw LexError(file, s.line, s.column, "unterminated block comment");
        closeSpan(s);
        pending.push_back({TriviaKind::BlockComment,
                           std::string(source.substr(s.begin, s.end - s.begin)), s});
      } else {
        break;
      }
    }
  };

  auto push = [&](TokenKind kind, const Span& span) {
    Token t;
    t.kind = kind;
    t.span = span;
    t.text = std::string(source.substr(span.begin, span.end - span.begin));
    t.leading = std::move(pending);
    pending.clear();
    tokens.push_back(std::move(t));
  };

  while (true) {
    collectTrivia();
    if (cur.atEnd()) break;

    char c = cur.peek();
    Span span = beginSpan();

    if (isIdentStart(c)) {
      while (!cur.atEnd() && isIdentPart(cur.peek())) cur.advance();
      closeSpan(span);
      std::string_view word = source.substr(span.begin, span.end - span.begin);
      push(isJavaKeyword(word) ? TokenKind::Keyword : TokenKind::Identifier, span);
      continue;
    }

    if (isDigit(c)) {
      if (c == '0' && (cur.peek(1) == 'x' || cur.peek(1) == 'X')) {
        cur.advance();
        cur.advance();
        while (!cur.atEnd() && std::isxdigit(static_cast<unsigned char>(cur.peek())))
          cur.advance();
      } else {
        while (!cur.atEnd() && isDigit(cur.peek())) cur.advance();
        if (cur.peek() == '.' && isDigit(cur.peek(1))) {
          cur.advance();
          while (!cur.atEnd() && isDigit(cur.peek())) cur.advance();
        }
        if (cur.peek() == 'e' || cur.peek() == 'E') {
          char sign = cur.peek(1);
          if (isDigit(sign) || ((sign == '+' || sign == '-') && isDigit(cur.peek(2)))) {
            cur.advance();
            if (cur.peek() == '+' || cur.peek() == '-') cur.advance();
            while (!cur.atEnd() && isDigit(cur.peek())) cur.advance();
          }
        }
      }
      char suf = cur.peek();
      if (suf == 'l' || suf == 'L' || suf == 'f' || suf == 'F' || suf == 'd' || suf == 'D')
        cur.advance();
      closeSpan(span);
      push(TokenKind::NumberLiteral, span);
      continue;
    }

    if (c == '"') {
      cur.advance();
      while (true) {
        if (cur.atEnd() || cur.peek() == '\n')
          throw LexError(file, span.line, span.column, "unterminated string literal");
        char s = cur.peek();
        if (s == '\\') {
          cur.advance();
          if (cur.atEnd())
            throw LexError(file, span.line, span.column, "unterminated string literal");
          cur.advance();
          continue;
        }
        cur.advance();
        if (s == '"') break;
      }
      closeSpan(span);
      push(TokenKind::StringLiteral, span);
      continue;
    }

    if (c == '@') {
      cur.advance();
      closeSpan(span);
      push(TokenKind::AnnotationMarker, span);
      continue;
    }

    // Two-char operators first, then single-char fallbacks. The parser
    // restricts where each may appear.
    static const std::array<std::string_view, 2> two = {"&&", "||"};
    bool matched = false;
    for (std::string_view op : two) {
      if (source.substr(cur.pos, op.size()) == op) {
        cur.advance();
        cur.advance();
        closeSpan(span);
        push(TokenKind::Punctuation, span);
        matched = true;
        break;
      }
    }
    if (matched) continue;

    static const std::string singles = ".,;(){}[]<>=!*?:+-/%&|^~";
    if (singles.find(c) != std::string::npos) {
      cur.advance();
      closeSpan(span);
      push(TokenKind::Punctuation, span);
      continue;
    }

    cur.fail(std::string("illegal character '") + c + "'");
  }

  Span eofSpan;
  eofSpan.line = cur.line;
  eofSpan.column = cur.column;
  eofSpan.endLine = cur.line;
  eofSpan.endColumn = cur.column;
  eofSpan.begin = cur.pos;
  eofSpan.end = cur.pos;
  push(TokenKind::EndOfFile, eofSpan);
  return tokens;
}

}  // namespace trigit
