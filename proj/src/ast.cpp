#include "trigit/ast.hpp"

namespace trigit {

const char* nodeKindName(NodeKind k) {
  switch (k) {
    case NodeKind::CompilationUnit: return "CompilationUnit";
    case NodeKind::ClassDecl: return "ClassDecl";
    case NodeKind::FieldDecl: return "FieldDecl";
    case NodeKind::MethodDecl: return "MethodDecl";
    case NodeKind::StaticBlock: return "StaticBlock";
    case NodeKind::Block: return "Block";
    case NodeKind::IfStmt: return "IfStmt";
    case NodeKind::ReturnStmt: return "ReturnStmt";
    case NodeKind::LocalVarStmt: return "LocalVarStmt";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::CallChain: return "CallChain";
    case NodeKind::MemberAccess: return "MemberAccess";
    case NodeKind::Literal: return "Literal";
    case NodeKind::NameRef: return "NameRef";
    case NodeKind::Annotation: return "Annotation";
    case NodeKind::ModifierList: return "ModifierList";
    case NodeKind::TypeRef: return "TypeRef";
    case NodeKind::Param: return "Param";
    case NodeKind::LogicExpr: return "LogicExpr";
  }
  return "?";
}

AstNodePtr cloneNode(const AstNode& node) {
  auto copy = std::make_unique<AstNode>(node.kind, node.span, node.text);
  copy->isCall = node.isCall;
  copy->isAssign = node.isAssign;
  copy->provenance = node.provenance;
  copy->children.reserve(node.children.size());
  for (const AstNodePtr& c : node.children) copy->children.push_back(cloneNode(*c));
  return copy;
}

bool structurallyEqual(const AstNode& a, const AstNode& b) {
  if (a.kind != b.kind || a.text != b.text || a.isCall != b.isCall ||
      a.isAssign != b.isAssign || a.provenance != b.provenance ||
      a.span.begin != b.span.begin || a.span.end != b.span.end ||
      a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!structurallyEqual(*a.children[i], *b.children[i])) return false;
  return true;
}

std::vector<const AstNode*> annotationsOf(const AstNode& decl) {
  std::vector<const AstNode*> out;
  for (const AstNodePtr& c : decl.children) {
    if (c->kind != NodeKind::Annotation) break;
    out.push_back(c.get());
  }
  return out;
}

bool hasAnnotation(const AstNode& decl, const std::string& name) {
  for (const AstNode* a : annotationsOf(decl))
    if (a->text == name) return true;
  return false;
}

const AstNode* modifierListOf(const AstNode& decl) {
  for (const AstNodePtr& c : decl.children)
    if (c->kind == NodeKind::ModifierList) return c.get();
  return nullptr;
}

const AstNode* declTypeOf(const AstNode& decl) {
  if (decl.kind == NodeKind::LocalVarStmt)
    return decl.children.empty() ? nullptr : decl.children.front().get();
  bool afterMods = false;
  for (const AstNodePtr& c : decl.children) {
    if (c->kind == NodeKind::ModifierList) {
      afterMods = true;
      continue;
    }
    if (afterMods && c->kind == NodeKind::TypeRef) return c.get();
  }
  return nullptr;
}

const AstNode* declNameOf(const AstNode& decl) {
  if (decl.kind == NodeKind::LocalVarStmt)
    return decl.children.size() > 1 ? decl.children[1].get() : nullptr;
  bool seenMods = false;
  for (const AstNodePtr& c : decl.children) {
    if (c->kind == NodeKind::ModifierList) {
      seenMods = true;
      continue;
    }
    if (seenMods && c->kind == NodeKind::NameRef) return c.get();
  }
  return nullptr;
}

std::vector<const AstNode*> paramsOf(const AstNode& method) {
  std::vector<const AstNode*> out;
  for (const AstNodePtr& c : method.children)
    if (c->kind == NodeKind::Param) out.push_back(c.get());
  return out;
}

const AstNode* bodyOf(const AstNode& method) {
  if (!method.children.empty() && method.children.back()->kind == NodeKind::Block)
    return method.children.back().get();
  return nullptr;
}

std::vector<const AstNode*> membersOf(const AstNode& classDecl) {
  std::vector<const AstNode*> out;
  bool nameSeen = false;
  for (const AstNodePtr& c : classDecl.children) {
    if (!nameSeen) {
      if (c->kind == NodeKind::NameRef) nameSeen = true;
      continue;
    }
    if (c->kind == NodeKind::TypeRef) continue;  // extends/implements
    out.push_back(c.get());
  }
  return out;
}

}  // namespace trigit
