#include "trigit/parser.hpp"

#include <optional>

#include "trigit/lexer.hpp"

namespace trigit {

namespace {

bool isModifierWord(const std::string& t) {
  return t == "public" || t == "protected" || t == "private" || t == "static" ||
         t == "final" || t == "abstract";
}

bool isPrimitiveType(const std::string& t) {
  return t == "boolean" || t == "int" || t == "long" || t == "short" || t == "byte" ||
         t == "char" || t == "float" || t == "double";
}

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::string file)
      : toks_(tokens), file_(std::move(file)) {}

  AstNodePtr parseUnit(std::string* packageName) {
    auto unit = node(NodeKind::CompilationUnit);
    unit->span.begin = 0;
    unit->span.line = 1;
    unit->span.column = 1;
    if (peekKeyword("package")) {
      expectKeyword("package");
      *packageName = parseQualifiedNameText();
      expectPunct(";");
    }
    while (peekKeyword("import")) {
      expectKeyword("import");
      if (peekKeyword("static")) expectKeyword("static");
      parseQualifiedNameText();
      if (peekPunct(".")) {  // trailing ".*"
        expectPunct(".");
        expectPunct("*");
      }
      expectPunct(";");
    }
    if (!startsClassDecl()) fail("class declaration");
    while (!at(TokenKind::EndOfFile)) {
      if (!startsClassDecl()) fail("class declaration");
      unit->children.push_back(parseClassDecl());
    }
    const Token& eof = cur();
    unit->span.end = eof.span.end;
    unit->span.endLine = eof.span.endLine;
    unit->span.endColumn = eof.span.endColumn;
    return unit;
  }

  AstNodePtr parseExpr() { return parseOrExpr(); }

  std::size_t position() const { return pos_; }

 private:
  const std::vector<Token>& toks_;
  std::string file_;
  std::size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  const Token& look(std::size_t off) const {
    std::size_t i = pos_ + off;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(TokenKind k) const { return cur().kind == k; }
  bool peekKeyword(const std::string& t) const { return cur().isKeyword(t); }
  bool peekPunct(const std::string& t) const { return cur().isPunct(t); }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = cur();
    std::string found = t.kind == TokenKind::EndOfFile
                            ? "end of file"
                            : "'" + t.text + "'";
    throw ParseError(file_, t.span.line, t.span.column, expected, found);
  }

  const Token& advance() { return toks_[pos_++]; }
  const Token& expectKeyword(const std::string& t) {
    if (!peekKeyword(t)) fail("'" + t + "'");
    return advance();
  }
  const Token& expectPunct(const std::string& t) {
    if (!peekPunct(t)) fail("'" + t + "'");
    return advance();
  }
  const Token& expectIdent() {
    if (!at(TokenKind::Identifier)) fail("identifier");
    return advance();
  }

  AstNodePtr node(NodeKind k) {
    return std::make_unique<AstNode>(k, cur().span);
  }
  static void closeTo(AstNode& n, const Token& last) {
    n.span.end = last.span.end;
    n.span.endLine = last.span.endLine;
    n.span.endColumn = last.span.endColumn;
  }
  static void closeTo(AstNode& n, const AstNode& last) {
    n.span.end = last.span.end;
    n.span.endLine = last.span.endLine;
    n.span.endColumn = last.span.endColumn;
  }

  std::string parseQualifiedNameText() {
    std::string out = expectIdent().text;
    while (peekPunct(".") && look(1).kind == TokenKind::Identifier) {
      advance();
      out += ".";
      out += advance().text;
    }
    return out;
  }

  // --- declarations ---

  bool startsClassDecl() const {
    std::size_t i = pos_;
    while (i < toks_.size()) {
      const Token& t = toks_[i];
      if (t.kind == TokenKind::AnnotationMarker) {
        i += 2;  // '@' Ident; argument parens handled below
        if (i < toks_.size() && toks_[i].isPunct("(")) {
          int depth = 0;
          while (i < toks_.size()) {
            if (toks_[i].isPunct("(")) ++depth;
            if (toks_[i].isPunct(")") && --depth == 0) {
              ++i;
              break;
            }
            ++i;
          }
        }
        continue;
      }
      if (t.kind == TokenKind::Keyword && isModifierWord(t.text)) {
        ++i;
        continue;
      }
      return t.isKeyword("class");
    }
    return false;
  }

  AstNodePtr parseAnnotation() {
    auto ann = node(NodeKind::Annotation);
    advance();  // '@'
    const Token& name = expectIdent();
    ann->text = name.text;
    closeTo(*ann, name);
    if (peekPunct("(")) {
      int depth = 0;
      const Token* last = nullptr;
      while (true) {
        if (at(TokenKind::EndOfFile)) fail("')'");
        const Token& t = advance();
        last = &t;
        if (t.isPunct("(")) ++depth;
        if (t.isPunct(")") && --depth == 0) break;
      }
      closeTo(*ann, *last);
    }
    return ann;
  }

  // Parses annotation* modifier* and appends them to `dst`; the ModifierList
  // node is always appended (zero-width at the next token when empty).
  void parseAnnotationsAndModifiers(AstNode& dst) {
    while (at(TokenKind::AnnotationMarker)) dst.children.push_back(parseAnnotation());
    auto mods = node(NodeKind::ModifierList);
    mods->span.end = mods->span.begin;
    mods->span.endLine = mods->span.line;
    mods->span.endColumn = mods->span.column;
    bool first = true;
    while (cur().kind == TokenKind::Keyword && isModifierWord(cur().text)) {
      // `static {` starts a static initializer, not a modifier list.
      if (cur().text == "static" && look(1).isPunct("{")) break;
      const Token& m = advance();
      if (!first) mods->text += " ";
      mods->text += m.text;
      if (first) {
        mods->span = m.span;
        first = false;
      }
      closeTo(*mods, m);
    }
    dst.children.push_back(std::move(mods));
  }

  AstNodePtr parseClassDecl() {
    auto cls = node(NodeKind::ClassDecl);
    parseAnnotationsAndModifiers(*cls);
    fixDeclStart(*cls);
    expectKeyword("class");
    const Token& name = expectIdent();
    auto nameNode = std::make_unique<AstNode>(NodeKind::NameRef, name.span, name.text);
    cls->children.push_back(std::move(nameNode));
    if (peekKeyword("extends")) {
      advance();
      cls->children.push_back(parseTypeRef());
    }
    if (peekKeyword("implements")) {
      advance();
      cls->children.push_back(parseTypeRef());
      while (peekPunct(",")) {
        advance();
        cls->children.push_back(parseTypeRef());
      }
    }
    expectPunct("{");
    while (!peekPunct("}")) {
      if (at(TokenKind::EndOfFile)) fail("'}'");
      cls->children.push_back(parseMember());
    }
    const Token& close = expectPunct("}");
    closeTo(*cls, close);
    return cls;
  }

  // Re-anchors a declaration's span at its first annotation/modifier token.
  void fixDeclStart(AstNode& decl) {
    const AstNode* first = nullptr;
    for (const AstNodePtr& c : decl.children) {
      if (c->kind == NodeKind::ModifierList && c->span.zeroWidth()) continue;
      first = c.get();
      break;
    }
    if (first) {
      decl.span.begin = first->span.begin;
      decl.span.line = first->span.line;
      decl.span.column = first->span.column;
    } else {
      decl.span.begin = cur().span.begin;
      decl.span.line = cur().span.line;
      decl.span.column = cur().span.column;
    }
  }

  AstNodePtr parseMember() {
    if (peekKeyword("static") && look(1).isPunct("{")) {
      auto sb = node(NodeKind::StaticBlock);
      advance();
      sb->children.push_back(parseBlock());
      closeTo(*sb, *sb->children.back());
      return sb;
    }
    if (startsClassDecl()) return parseClassDecl();

    auto decl = node(NodeKind::MethodDecl);  // kind fixed up below
    parseAnnotationsAndModifiers(*decl);
    fixDeclStart(*decl);

    AstNodePtr type;
    if (peekKeyword("void")) {
      const Token& v = advance();
      type = std::make_unique<AstNode>(NodeKind::TypeRef, v.span, v.text);
    } else {
      type = parseTypeRef();
    }
    decl->children.push_back(std::move(type));
    const Token& name = expectIdent();
    decl->children.push_back(
        std::make_unique<AstNode>(NodeKind::NameRef, name.span, name.text));

    if (peekPunct("(")) {
      advance();
      if (!peekPunct(")")) {
        decl->children.push_back(parseParam());
        while (peekPunct(",")) {
          advance();
          decl->children.push_back(parseParam());
        }
      }
      expectPunct(")");
      if (peekKeyword("throws")) {
        advance();
        decl->children.push_back(parseTypeRef());
        while (peekPunct(",")) {
          advance();
          decl->children.push_back(parseTypeRef());
        }
      }
      if (peekPunct(";")) {
        const Token& semi = advance();
        closeTo(*decl, semi);
      } else {
        decl->children.push_back(parseBlock());
        closeTo(*decl, *decl->children.back());
      }
      return decl;
    }

    // Field: annotation* modifier* typeRef Ident ("=" expr)? ";"
    decl->kind = NodeKind::FieldDecl;
    if (peekPunct("=")) {
      advance();
      decl->children.push_back(parseExpr());
    }
    const Token& semi = expectPunct(";");
    closeTo(*decl, semi);
    return decl;
  }

  AstNodePtr parseParam() {
    auto p = node(NodeKind::Param);
    p->children.push_back(parseTypeRef());
    const Token& name = expectIdent();
    p->children.push_back(std::make_unique<AstNode>(NodeKind::NameRef, name.span, name.text));
    closeTo(*p, name);
    return p;
  }

  // typeRef := (Ident ("." Ident)* | primitive) genericArgs? ("[" "]")*
  // The text is kept verbatim; generic argument internals are not modeled.
  AstNodePtr parseTypeRef() {
    if (!(at(TokenKind::Identifier) ||
          (cur().kind == TokenKind::Keyword && isPrimitiveType(cur().text))))
      fail("type");
    std::size_t first = pos_;
    auto tr = node(NodeKind::TypeRef);
    const Token* last = &advance();
    if (last->kind == TokenKind::Identifier) {
      while (peekPunct(".") && look(1).kind == TokenKind::Identifier) {
        advance();
        last = &advance();
      }
    }
    if (peekPunct("<")) {
      int depth = 0;
      while (true) {
        if (at(TokenKind::EndOfFile)) fail("'>'");
        const Token& t = advance();
        last = &t;
        if (t.isPunct("<")) ++depth;
        if (t.isPunct(">") && --depth == 0) break;
      }
    }
    while (peekPunct("[") && look(1).isPunct("]")) {
      advance();
      last = &advance();
    }
    closeTo(*tr, *last);
    tr->text = textOfTokenRange(toks_, first, pos_ - 1);
    return tr;
  }

  // --- statements ---

  AstNodePtr parseBlock() {
    auto blk = node(NodeKind::Block);
    expectPunct("{");
    while (!peekPunct("}")) {
      if (at(TokenKind::EndOfFile)) fail("'}'");
      blk->children.push_back(parseStmt());
    }
    const Token& close = advance();
    closeTo(*blk, close);
    return blk;
  }

  AstNodePtr parseStmt() {
    if (peekPunct("{")) return parseBlock();
    if (peekKeyword("if")) return parseIfStmt();
    if (peekKeyword("return")) {
      auto ret = node(NodeKind::ReturnStmt);
      advance();
      if (!peekPunct(";")) ret->children.push_back(parseExpr());
      const Token& semi = expectPunct(";");
      closeTo(*ret, semi);
      return ret;
    }
    if (cur().kind == TokenKind::Keyword && !isPrimitiveType(cur().text) &&
        !peekKeyword("this") && !peekKeyword("true") && !peekKeyword("false") &&
        !peekKeyword("null"))
      fail("statement");

    if (std::optional<AstNodePtr> lv = tryParseLocalVar()) {
      const Token& semi = expectPunct(";");
      closeTo(**lv, semi);
      return std::move(*lv);
    }

    auto stmt = node(NodeKind::ExprStmt);
    AstNodePtr lhs = parseExpr();
    if (peekPunct("=")) {
      if (!isAssignTarget(*lhs)) fail("';'");
      advance();
      stmt->isAssign = true;
      stmt->children.push_back(std::move(lhs));
      stmt->children.push_back(parseExpr());
    } else {
      stmt->children.push_back(std::move(lhs));
    }
    const Token& semi = expectPunct(";");
    closeTo(*stmt, semi);
    return stmt;
  }

  static bool isAssignTarget(const AstNode& e) {
    if (e.kind == NodeKind::NameRef) return true;
    if (e.kind != NodeKind::CallChain) return false;
    for (const AstNodePtr& link : e.children) {
      if (link->kind == NodeKind::MemberAccess && link->isCall) return false;
      if (link->kind != NodeKind::NameRef && link->kind != NodeKind::MemberAccess)
        return false;
    }
    return true;
  }

  AstNodePtr parseIfStmt() {
    auto ifs = node(NodeKind::IfStmt);
    expectKeyword("if");
    expectPunct("(");
    ifs->children.push_back(parseExpr());
    expectPunct(")");
    ifs->children.push_back(parseStmt());
    closeTo(*ifs, *ifs->children.back());
    if (peekKeyword("else")) {
      advance();
      ifs->children.push_back(parseStmt());
      closeTo(*ifs, *ifs->children.back());
    }
    return ifs;
  }

  // localVar := typeRef Ident ("=" expr)?   (the ';' stays with the caller)
  std::optional<AstNodePtr> tryParseLocalVar() {
    std::size_t save = pos_;
    bool headIsType = at(TokenKind::Identifier) ||
                      (cur().kind == TokenKind::Keyword && isPrimitiveType(cur().text));
    if (!headIsType) return std::nullopt;
    try {
      auto lv = node(NodeKind::LocalVarStmt);
      lv->children.push_back(parseTypeRef());
      if (!at(TokenKind::Identifier)) {
        pos_ = save;
        return std::nullopt;
      }
      const Token& name = advance();
      if (!peekPunct("=") && !peekPunct(";")) {
        pos_ = save;
        return std::nullopt;
      }
      lv->children.push_back(
          std::make_unique<AstNode>(NodeKind::NameRef, name.span, name.text));
      closeTo(*lv, name);
      if (peekPunct("=")) {
        advance();
        lv->children.push_back(parseExpr());
        closeTo(*lv, *lv->children.back());
      }
      return lv;
    } catch (const ParseError&) {
      pos_ = save;
      return std::nullopt;
    }
  }

  // --- expressions ---

  AstNodePtr parseOrExpr() {
    AstNodePtr lhs = parseAndExpr();
    if (!peekPunct("||")) return lhs;
    auto logic = std::make_unique<AstNode>(NodeKind::LogicExpr, lhs->span, "||");
    logic->children.push_back(std::move(lhs));
    while (peekPunct("||")) {
      advance();
      logic->children.push_back(parseAndExpr());
    }
    closeTo(*logic, *logic->children.back());
    return logic;
  }

  AstNodePtr parseAndExpr() {
    AstNodePtr lhs = parseUnary();
    if (!peekPunct("&&")) return lhs;
    auto logic = std::make_unique<AstNode>(NodeKind::LogicExpr, lhs->span, "&&");
    logic->children.push_back(std::move(lhs));
    while (peekPunct("&&")) {
      advance();
      logic->children.push_back(parseUnary());
    }
    closeTo(*logic, *logic->children.back());
    return logic;
  }

  AstNodePtr parseUnary() {
    if (peekPunct("!")) {
      auto logic = node(NodeKind::LogicExpr);
      logic->text = "!";
      advance();
      logic->children.push_back(parseUnary());
      closeTo(*logic, *logic->children.back());
      return logic;
    }
    return parsePostfix();
  }

  AstNodePtr parsePostfix() {
    Span start = cur().span;
    AstNodePtr head = parsePrimary();
    bool headIsCallLink = head->kind == NodeKind::MemberAccess;
    if (!headIsCallLink && !(peekPunct(".") && look(1).kind == TokenKind::Identifier))
      return head;

    auto chain = std::make_unique<AstNode>(NodeKind::CallChain, start);
    chain->span = head->span;
    chain->span.begin = start.begin;
    chain->span.line = start.line;
    chain->span.column = start.column;
    chain->children.push_back(std::move(head));
    while (peekPunct(".") && look(1).kind == TokenKind::Identifier) {
      advance();
      const Token& name = advance();
      auto link = std::make_unique<AstNode>(NodeKind::MemberAccess, name.span, name.text);
      if (peekPunct("(")) {
        link->isCall = true;
        const Token& close = parseCallArgs(*link);
        closeTo(*link, close);
      }
      chain->children.push_back(std::move(link));
    }
    closeTo(*chain, *chain->children.back());
    return chain;
  }

  // callArgs := "(" (expr ("," expr)*)? ")"; returns the closing token.
  const Token& parseCallArgs(AstNode& call) {
    expectPunct("(");
    if (!peekPunct(")")) {
      call.children.push_back(parseExpr());
      while (peekPunct(",")) {
        advance();
        call.children.push_back(parseExpr());
      }
    }
    return expectPunct(")");
  }

  AstNodePtr parsePrimary() {
    const Token& t = cur();
    if (t.kind == TokenKind::StringLiteral || t.kind == TokenKind::NumberLiteral) {
      advance();
      return std::make_unique<AstNode>(NodeKind::Literal, t.span, t.text);
    }
    if (t.isKeyword("true") || t.isKeyword("false") || t.isKeyword("null")) {
      advance();
      return std::make_unique<AstNode>(NodeKind::Literal, t.span, t.text);
    }
    if (t.isKeyword("this")) {
      advance();
      return std::make_unique<AstNode>(NodeKind::NameRef, t.span, t.text);
    }
    if (t.isPunct("(")) {
      advance();
      AstNodePtr inner = parseExpr();
      expectPunct(")");
      return inner;
    }
    if (t.kind == TokenKind::Identifier) {
      advance();
      if (peekPunct("(")) {
        // Bare call: model as a call link heading its chain.
        auto link = std::make_unique<AstNode>(NodeKind::MemberAccess, t.span, t.text);
        link->isCall = true;
        const Token& close = parseCallArgs(*link);
        closeTo(*link, close);
        return link;
      }
      return std::make_unique<AstNode>(NodeKind::NameRef, t.span, t.text);
    }
    fail("expression");
  }
};

}  // namespace

CompilationUnit parseCompilationUnit(std::vector<Token> tokens, const std::string& file) {
  CompilationUnit unit;
  unit.file = file;
  unit.tokens = std::move(tokens);
  Parser p(unit.tokens, file);
  unit.root = p.parseUnit(&unit.packageName);
  return unit;
}

CompilationUnit parseSource(std::string_view source, const std::string& file) {
  return parseCompilationUnit(tokenize(source, file), file);
}

AstNodePtr parseExpression(const std::vector<Token>& tokens, const std::string& file) {
  Parser p(tokens, file);
  AstNodePtr e = p.parseExpr();
  if (tokens[p.position()].kind != TokenKind::EndOfFile)
    throw ParseError(file, tokens[p.position()].span.line, tokens[p.position()].span.column,
                     "end of expression", "'" + tokens[p.position()].text + "'");
  return e;
}

}  // namespace trigit
