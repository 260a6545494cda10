#pragma once

#include <memory>
#include <string>
#include <vector>

#include "trigit/token.hpp"

namespace trigit {

// Concrete-syntax-tree node kinds for the supported Java subset. LogicExpr
// carries "&&", "||" or "!" in `text`; everything else follows the child
// layouts documented below.
enum class NodeKind {
  CompilationUnit,
  ClassDecl,    // [Annotation*, ModifierList, NameRef, TypeRef(extends)?, TypeRef(implements)*, member*]
  FieldDecl,    // [Annotation*, ModifierList, TypeRef, NameRef, init-expr?]
  MethodDecl,   // [Annotation*, ModifierList, TypeRef(return), NameRef, Param*, TypeRef(throws)*, Block?]
  StaticBlock,  // [Block]
  Block,        // [stmt*]
  IfStmt,       // [cond, then-stmt, else-stmt?]
  ReturnStmt,   // [expr?]
  LocalVarStmt, // [TypeRef, NameRef, init-expr?]
  ExprStmt,     // [expr] or, when isAssign, [target, value]
  CallChain,    // [head-link, link*]; links after the head are MemberAccess
  MemberAccess, // text = member name; children = call args when isCall
  Literal,      // text = raw lexeme (quotes/escapes preserved for strings)
  NameRef,      // text = identifier ("this" included)
  Annotation,   // text = annotation name; argument tokens are opaque
  ModifierList, // text = modifiers as written, space-joined; may be empty
  TypeRef,      // text = type exactly as written (generics/arrays opaque)
  Param,        // [TypeRef, NameRef]
  LogicExpr,    // text = "&&" | "||" | "!"; children = operands
};

const char* nodeKindName(NodeKind k);

enum class LiteralProvenance { SourceLiteral, Substituted };

struct AstNode;
using AstNodePtr = std::unique_ptr<AstNode>;

struct AstNode {
  NodeKind kind;
  Span span;
  std::string text;
  bool isCall = false;    // MemberAccess only
  bool isAssign = false;  // ExprStmt only
  LiteralProvenance provenance = LiteralProvenance::SourceLiteral;  // Literal only
  std::vector<AstNodePtr> children;

  AstNode(NodeKind k, Span s) : kind(k), span(s) {}
  AstNode(NodeKind k, Span s, std::string t) : kind(k), span(s), text(std::move(t)) {}
};

AstNodePtr cloneNode(const AstNode& node);
bool structurallyEqual(const AstNode& a, const AstNode& b);

// One parsed source file: the token stream is the ground truth for printing,
// the tree indexes into it through spans.
struct CompilationUnit {
  std::string file;
  std::vector<Token> tokens;  // ends with the EndOfFile sentinel
  AstNodePtr root;            // kind CompilationUnit; children are ClassDecls
  std::string packageName;    // empty when no package declaration
};

// --- positional accessors for the fixed child layouts ---

std::vector<const AstNode*> annotationsOf(const AstNode& decl);
bool hasAnnotation(const AstNode& decl, const std::string& name);
const AstNode* modifierListOf(const AstNode& decl);
const AstNode* declTypeOf(const AstNode& decl);    // return/field/var type
const AstNode* declNameOf(const AstNode& decl);    // ClassDecl/FieldDecl/MethodDecl/LocalVarStmt name
std::vector<const AstNode*> paramsOf(const AstNode& method);
const AstNode* bodyOf(const AstNode& method);      // trailing Block or nullptr
std::vector<const AstNode*> membersOf(const AstNode& classDecl);

// Depth-first visit (node first, then children). Return false to stop.
template <typename F>
void visit(const AstNode& node, F&& fn) {
  if (!fn(node)) return;
  for (const AstNodePtr& c : node.children) visit(*c, fn);
}

}  // namespace trigit
