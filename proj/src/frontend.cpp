#include "trigit/frontend.hpp"

#include <algorithm>
#include <map>

#include "trigit/lexer.hpp"

namespace trigit {

const char* queryOpName(QueryOp op) {
  switch (op) {
    case QueryOp::SourceClasses: return "getClasses";
    case QueryOp::SourceJavaFiles: return "getJavaFiles";
    case QueryOp::SourceBuildConfigs: return "getBuildConfigs";
    case QueryOp::Filter: return "filter";
    case QueryOp::Map: return "map";
    case QueryOp::Count: return "count";
    case QueryOp::AnyMatch: return "anyMatch";
    case QueryOp::FindAny: return "findAny";
    case QueryOp::GetName: return "getName";
    case QueryOp::GetModifiers: return "getModifiers";
    case QueryOp::GetFields: return "getFields";
    case QueryOp::GetMethods: return "getMethods";
    case QueryOp::GetClass: return "getClass";
    case QueryOp::HasClass: return "hasClass";
    case QueryOp::GetMethod: return "getMethod";
    case QueryOp::GetField: return "getField";
    case QueryOp::GetJavaVersion: return "getJavaVersion";
    case QueryOp::IsPresent: return "isPresent";
    case QueryOp::IsPublic: return "isPublic";
    case QueryOp::IsProtected: return "isProtected";
    case QueryOp::IsPrivate: return "isPrivate";
    case QueryOp::IsStatic: return "isStatic";
    case QueryOp::IsFinal: return "isFinal";
    case QueryOp::GreaterEqualThan: return "greaterEqualThan";
    case QueryOp::Equals: return "equals";
    case QueryOp::And: return "and";
    case QueryOp::Or: return "or";
    case QueryOp::Not: return "not";
    case QueryOp::LiteralString: return "string";
    case QueryOp::LiteralNumber: return "number";
    case QueryOp::LiteralBool: return "bool";
    case QueryOp::VersionConst: return "version";
  }
  return "?";
}

const char* mutationName(MutationKind m) {
  switch (m) {
    case MutationKind::SetPublic: return "setPublic";
    case MutationKind::SetProtected: return "setProtected";
    case MutationKind::SetPrivate: return "setPrivate";
    case MutationKind::SetStatic: return "setStatic";
    case MutationKind::SetFinal: return "setFinal";
    case MutationKind::RemoveMethod: return "removeMethod";
    case MutationKind::RemoveField: return "removeField";
  }
  return "?";
}

const char* encodingErrorCategoryName(EncodingErrorCategory c) {
  switch (c) {
    case EncodingErrorCategory::BadSignature: return "BAD_SIGNATURE";
    case EncodingErrorCategory::BadBodyShape: return "BAD_BODY_SHAPE";
    case EncodingErrorCategory::UnknownApi: return "UNKNOWN_API";
    case EncodingErrorCategory::MissingReferent: return "MISSING_REFERENT";
    case EncodingErrorCategory::Ambiguous: return "AMBIGUOUS";
  }
  return "?";
}

std::vector<TrigItMethodRef> collectTrigItMethods(const ProjectBuild& build) {
  std::vector<TrigItMethodRef> refs;
  for (const ParsedFile& file : build.files) {
    for (const AstNodePtr& top : file.unit.root->children) {
      if (top->kind != NodeKind::ClassDecl) continue;
      std::string qualified = file.unit.packageName.empty()
                                  ? declNameOf(*top)->text
                                  : file.unit.packageName + "." + declNameOf(*top)->text;
      for (const AstNode* member : membersOf(*top)) {
        if (member->kind != NodeKind::MethodDecl) continue;
        if (!hasAnnotation(*member, "TrigItMethod")) continue;
        refs.push_back({&file, top.get(), member, qualified});
      }
    }
  }
  return refs;
}

namespace {

EncodingError makeError(const TrigItMethodRef& ref, EncodingErrorCategory cat,
                        const Span& where, std::string message) {
  return EncodingError{ref.classQualifiedName + "." + declNameOf(*ref.methodDecl)->text,
                       ref.file->path, where, cat, std::move(message)};
}

bool isPrintChain(const AstNode& chain) {
  if (chain.kind != NodeKind::CallChain || chain.children.empty()) return false;
  const AstNode& head = *chain.children[0];
  return head.kind == NodeKind::NameRef && head.text == "System";
}

bool isTrigItChain(const AstNode& chain) {
  if (chain.kind != NodeKind::CallChain || chain.children.empty()) return false;
  const AstNode& head = *chain.children[0];
  return head.kind == NodeKind::NameRef && head.text == "TrigIt";
}

}  // namespace

ValidationResult validateTrigItMethod(const TrigItMethodRef& ref) {
  ValidationResult result;
  const AstNode& method = *ref.methodDecl;
  const Span nameSpan = declNameOf(method)->span;

  // (a) no parameters, no throws clause
  if (!paramsOf(method).empty())
    result.errors.push_back(makeError(ref, EncodingErrorCategory::BadSignature, nameSpan,
                                      "TrigIt method must not declare parameters"));
  bool sawReturnType = false;
  for (const AstNodePtr& c : method.children) {
    if (c->kind != NodeKind::TypeRef) continue;
    if (!sawReturnType) {
      sawReturnType = true;  // first TypeRef is the return type
      continue;
    }
    result.errors.push_back(makeError(ref, EncodingErrorCategory::BadSignature, c->span,
                                      "TrigIt method must not declare a throws clause"));
    break;
  }

  // (b) return type boolean or void
  const std::string& retType = declTypeOf(method)->text;
  UnitKind kind = UnitKind::Trigger;
  if (retType == "boolean") {
    kind = UnitKind::Trigger;
  } else if (retType == "void") {
    kind = UnitKind::Action;
  } else {
    result.errors.push_back(makeError(ref, EncodingErrorCategory::BadSignature,
                                      declTypeOf(method)->span,
                                      "TrigIt method must return boolean or void, not '" +
                                          retType + "'"));
    return result;
  }

  const AstNode* body = bodyOf(method);
  if (!body) {
    result.errors.push_back(makeError(ref, EncodingErrorCategory::BadBodyShape, nameSpan,
                                      "TrigIt method must have a body"));
    return result;
  }

  ValidatedMethod vm;
  vm.kind = kind;

  if (kind == UnitKind::Trigger) {
    // (c) exactly one statement: return <query expression>;
    if (body->children.size() != 1 || body->children[0]->kind != NodeKind::ReturnStmt ||
        body->children[0]->children.empty()) {
      result.errors.push_back(makeError(
          ref, EncodingErrorCategory::BadBodyShape,
          body->children.empty() ? body->span : body->children[0]->span,
          "trigger body must be a single return statement with a query expression"));
    } else {
      vm.queryExpr = body->children[0]->children[0].get();
    }
  } else {
    // (d) exactly one if statement, no else; then-branch holds only
    // transformation and print statements.
    if (body->children.size() != 1 || body->children[0]->kind != NodeKind::IfStmt) {
      result.errors.push_back(makeError(
          ref, EncodingErrorCategory::BadBodyShape,
          body->children.empty() ? body->span : body->children[0]->span,
          "action body must be a single if statement guarding the transformation steps"));
    } else {
      const AstNode& ifStmt = *body->children[0];
      if (ifStmt.children.size() > 2) {
        result.errors.push_back(makeError(ref, EncodingErrorCategory::BadBodyShape,
                                          ifStmt.children[2]->span,
                                          "action if statement must not have an else branch"));
      }
      vm.queryExpr = ifStmt.children[0].get();
      const AstNode& thenBranch = *ifStmt.children[1];
      std::vector<const AstNode*> stmts;
      if (thenBranch.kind == NodeKind::Block) {
        for (const AstNodePtr& s : thenBranch.children) stmts.push_back(s.get());
      } else {
        stmts.push_back(&thenBranch);
      }
      for (const AstNode* s : stmts) {
        bool ok = s->kind == NodeKind::ExprStmt && !s->isAssign &&
                  s->children.size() == 1 &&
                  (isTrigItChain(*s->children[0]) || isPrintChain(*s->children[0]));
        if (!ok) {
          result.errors.push_back(
              makeError(ref, EncodingErrorCategory::BadBodyShape, s->span,
                        "action then-block may contain only transformation and "
                        "print statements"));
          continue;
        }
        vm.actionStmts.push_back(s);
      }
    }
  }

  if (result.errors.empty()) result.valid = vm;
  return result;
}

StripResult stripForEvaluation(const AstNode& classDecl) {
  StripResult out;
  out.classDecl = std::make_unique<AstNode>(classDecl.kind, classDecl.span, classDecl.text);

  for (const AstNodePtr& child : classDecl.children) {
    bool isMember = false;
    bool keep = true;
    switch (child->kind) {
      case NodeKind::FieldDecl:
      case NodeKind::StaticBlock:
        isMember = true;
        keep = false;
        break;
      case NodeKind::ClassDecl:
        isMember = true;
        keep = false;
        // The class-removal rule applies before descending, so annotated
        // methods inside vanish with it.
        visit(*child, [&](const AstNode& n) {
          if (n.kind == NodeKind::MethodDecl && hasAnnotation(n, "TrigItMethod"))
            out.diagnostics.push_back("unreachable TrigIt method '" +
                                      declNameOf(n)->text + "' inside nested class '" +
                                      declNameOf(*child)->text + "'");
          return true;
        });
        break;
      case NodeKind::MethodDecl:
        isMember = true;
        keep = hasAnnotation(*child, "TrigItMethod");
        break;
      default:
        break;
    }
    if (isMember && !keep) {
      out.removedMemberSpans.push_back(child->span);
      continue;
    }
    out.classDecl->children.push_back(cloneNode(*child));
  }
  return out;
}

namespace {

std::string quoteName(const std::string& name) { return "\"" + name + "\""; }

bool isTriggerCallHead(const AstNode& head, const SubstitutionContext& ctx) {
  return head.kind == NodeKind::MemberAccess && head.isCall &&
         std::find(ctx.triggerNames.begin(), ctx.triggerNames.end(), head.text) !=
             ctx.triggerNames.end();
}

void substituteNode(AstNodePtr& node, const SubstitutionContext& ctx,
                    std::vector<TextEdit>& edits);

void substituteInArgs(AstNode& chain, const SubstitutionContext& ctx,
                      std::vector<TextEdit>& edits) {
  for (AstNodePtr& link : chain.children) {
    if (link->kind != NodeKind::MemberAccess) continue;
    for (AstNodePtr& arg : link->children) substituteNode(arg, ctx, edits);
  }
}

void substituteNode(AstNodePtr& node, const SubstitutionContext& ctx,
                    std::vector<TextEdit>& edits) {
  switch (node->kind) {
    case NodeKind::LogicExpr:
      for (AstNodePtr& c : node->children) substituteNode(c, ctx, edits);
      return;
    case NodeKind::Literal:
      return;
    case NodeKind::NameRef: {
      if (node->text == "TrigIt" || node->text == "this" || node->text == "System")
        return;  // bare API/receiver names are left for the compiler to judge
      auto lit = std::make_unique<AstNode>(NodeKind::Literal, node->span,
                                           quoteName(node->text));
      lit->provenance = LiteralProvenance::Substituted;
      edits.push_back({node->span, lit->text});
      node = std::move(lit);
      return;
    }
    case NodeKind::CallChain: {
      const AstNode& head = *node->children[0];
      bool apiChain = (head.kind == NodeKind::NameRef &&
                       (head.text == "TrigIt" || head.text == "System")) ||
                      isTriggerCallHead(head, ctx);
      if (apiChain) {
        substituteInArgs(*node, ctx, edits);
        return;
      }
      // Project access: the whole chain collapses to the name of its last
      // member; arguments are discarded.
      const AstNode& last = *node->children.back();
      std::string name = last.kind == NodeKind::MemberAccess || last.kind == NodeKind::NameRef
                             ? last.text
                             : last.text;
      auto lit = std::make_unique<AstNode>(NodeKind::Literal, node->span, quoteName(name));
      lit->provenance = LiteralProvenance::Substituted;
      edits.push_back({node->span, lit->text});
      node = std::move(lit);
      return;
    }
    default:
      for (AstNodePtr& c : node->children) substituteNode(c, ctx, edits);
      return;
  }
}

}  // namespace

std::vector<TextEdit> nameSubstitute(AstNodePtr& expr, const SubstitutionContext& ctx) {
  std::vector<TextEdit> edits;
  substituteNode(expr, ctx, edits);
  return edits;
}

// ---------------------------------------------------------------------------
// compilation

namespace {

struct VType {
  enum Tag {
    Stream,
    Optional,
    ClassE,
    MethodE,
    FieldE,
    FileE,
    ConfigE,
    Str,
    Num,
    Bool,
    Version,
    Mods,
    Invalid
  };
  Tag tag = Invalid;
  Tag inner = Invalid;  // element type for Stream/Optional

  static VType of(Tag t) { return {t, Invalid}; }
  static VType stream(Tag elem) { return {Stream, elem}; }
  static VType optional(Tag elem) { return {Optional, elem}; }
  bool isElem() const {
    return tag == ClassE || tag == MethodE || tag == FieldE || tag == FileE ||
           tag == ConfigE;
  }
};

bool predicateApplies(VType::Tag t) {
  return t == VType::ClassE || t == VType::MethodE || t == VType::FieldE ||
         t == VType::Mods;
}

struct Compiler {
  const TrigItMethodRef& ref;
  std::vector<EncodingError>& errors;
  bool failed = false;

  void error(EncodingErrorCategory cat, const Span& where, std::string msg) {
    errors.push_back(makeError(ref, cat, where, std::move(msg)));
    failed = true;
  }

  // Extracts the single string-literal argument of a call link.
  std::optional<std::pair<std::string, LiteralProvenance>> nameArg(const AstNode& link) {
    if (link.children.size() != 1 || link.children[0]->kind != NodeKind::Literal ||
        link.children[0]->text.empty() || link.children[0]->text[0] != '"') {
      error(EncodingErrorCategory::UnknownApi, link.span,
            "'" + link.text + "' expects a single name argument");
      return std::nullopt;
    }
    return std::make_pair(decodeStringLiteral(link.children[0]->text),
                          link.children[0]->provenance);
  }

  bool expectNoArgs(const AstNode& link) {
    if (!link.children.empty()) {
      error(EncodingErrorCategory::UnknownApi, link.span,
            "'" + link.text + "' takes no arguments");
      return false;
    }
    return true;
  }

  static QueryNodePtr mk(QueryOp op, const Span& span) {
    auto n = std::make_unique<QueryNode>();
    n->op = op;
    n->span = span;
    return n;
  }

  QueryNodePtr compileExpr(const AstNode& e, VType& type) {
    switch (e.kind) {
      case NodeKind::LogicExpr: {
        QueryOp op = e.text == "&&" ? QueryOp::And
                     : e.text == "||" ? QueryOp::Or
                                      : QueryOp::Not;
        auto node = mk(op, e.span);
        for (const AstNodePtr& c : e.children) {
          VType ct;
          QueryNodePtr cc = compileExpr(*c, ct);
          if (!cc) return nullptr;
          if (ct.tag != VType::Bool) {
            error(EncodingErrorCategory::BadBodyShape, c->span,
                  "logic operands must be boolean queries");
            return nullptr;
          }
          node->children.push_back(std::move(cc));
        }
        type = VType::of(VType::Bool);
        return node;
      }
      case NodeKind::Literal:
        return compileLiteral(e, type);
      case NodeKind::CallChain:
        return compileChain(e, type);
      case NodeKind::NameRef:
        error(EncodingErrorCategory::UnknownApi, e.span,
              "unexpected name '" + e.text + "' in query expression");
        return nullptr;
      default:
        error(EncodingErrorCategory::BadBodyShape, e.span,
              "unsupported construct in query expression");
        return nullptr;
    }
  }

  QueryNodePtr compileLiteral(const AstNode& e, VType& type) {
    if (!e.text.empty() && e.text[0] == '"') {
      auto n = mk(QueryOp::LiteralString, e.span);
      n->name = decodeStringLiteral(e.text);
      n->nameProvenance = e.provenance;
      type = VType::of(VType::Str);
      return n;
    }
    if (e.text == "true" || e.text == "false") {
      auto n = mk(QueryOp::LiteralBool, e.span);
      n->boolean = e.text == "true";
      type = VType::of(VType::Bool);
      return n;
    }
    if (e.text == "null") {
      error(EncodingErrorCategory::UnknownApi, e.span,
            "null literal is not part of the query API");
      return nullptr;
    }
    auto n = mk(QueryOp::LiteralNumber, e.span);
    n->number = std::stod(e.text);
    type = VType::of(VType::Num);
    return n;
  }

  QueryNodePtr compileChain(const AstNode& chain, VType& type) {
    const AstNode& head = *chain.children[0];
    if (head.kind == NodeKind::MemberAccess && head.isCall) {
      error(EncodingErrorCategory::UnknownApi, head.span,
            "call to '" + head.text +
                "' is not part of the query API (trigger-to-trigger references are "
                "not supported)");
      return nullptr;
    }
    if (!(head.kind == NodeKind::NameRef && head.text == "TrigIt")) {
      error(EncodingErrorCategory::UnknownApi, head.span,
            "query chains must start at the TrigIt API");
      return nullptr;
    }
    if (chain.children.size() < 2) {
      error(EncodingErrorCategory::UnknownApi, chain.span, "incomplete TrigIt chain");
      return nullptr;
    }

    QueryNodePtr current;
    VType cur;
    // First link: rooted at the API object.
    {
      const AstNode& link = *chain.children[1];
      const std::string& n = link.text;
      if (!link.isCall) {
        if (n.size() == 5 && n.rfind("JAVA", 0) == 0 && n[4] >= '5' && n[4] <= '9') {
          current = mk(QueryOp::VersionConst, link.span);
          current->versionMajor = n[4] - '0';
          cur = VType::of(VType::Version);
        } else {
          error(EncodingErrorCategory::UnknownApi, link.span,
                "unknown TrigIt constant '" + n + "'");
          return nullptr;
        }
      } else if (n == "getClasses" && expectNoArgs(link)) {
        current = mk(QueryOp::SourceClasses, link.span);
        cur = VType::stream(VType::ClassE);
      } else if (n == "getJavaFiles" && expectNoArgs(link)) {
        current = mk(QueryOp::SourceJavaFiles, link.span);
        cur = VType::stream(VType::FileE);
      } else if (n == "getBuildConfigs" && expectNoArgs(link)) {
        current = mk(QueryOp::SourceBuildConfigs, link.span);
        cur = VType::stream(VType::ConfigE);
      } else if (n == "getJavaVersion" && expectNoArgs(link)) {
        current = mk(QueryOp::GetJavaVersion, link.span);
        cur = VType::of(VType::Version);
      } else if (n == "getClass") {
        auto arg = nameArg(link);
        if (!arg) return nullptr;
        current = mk(QueryOp::GetClass, link.span);
        current->name = arg->first;
        current->nameProvenance = arg->second;
        cur = VType::of(VType::ClassE);
      } else if (n == "hasClass") {
        auto arg = nameArg(link);
        if (!arg) return nullptr;
        current = mk(QueryOp::HasClass, link.span);
        current->name = arg->first;
        current->nameProvenance = arg->second;
        cur = VType::of(VType::Bool);
      } else if (n == "getMethod" || n == "getField") {
        auto arg = nameArg(link);
        if (!arg) return nullptr;
        current = mk(n == "getMethod" ? QueryOp::GetMethod : QueryOp::GetField, link.span);
        current->name = arg->first;
        current->nameProvenance = arg->second;
        cur = VType::of(n == "getMethod" ? VType::MethodE : VType::FieldE);
      } else if (failed) {
        return nullptr;
      } else {
        error(EncodingErrorCategory::UnknownApi, link.span,
              "unknown TrigIt API '" + n + "'");
        return nullptr;
      }
    }

    for (std::size_t i = 2; i < chain.children.size(); ++i) {
      const AstNode& link = *chain.children[i];
      if (!applyLink(link, current, cur)) return nullptr;
    }
    type = cur;
    return current;
  }

  bool applyLink(const AstNode& link, QueryNodePtr& current, VType& cur) {
    const std::string& n = link.text;
    auto wrap = [&](QueryOp op) {
      auto node = mk(op, link.span);
      node->children.push_back(std::move(current));
      current = std::move(node);
    };
    auto misuse = [&](const std::string& what) {
      error(EncodingErrorCategory::UnknownApi, link.span,
            "'" + n + "' " + what);
      return false;
    };

    if (!link.isCall) return misuse("is not a TrigIt API call");

    if (n == "filter" || n == "anyMatch") {
      if (cur.tag != VType::Stream) return misuse("applies to streams only");
      if (!predicateApplies(cur.inner))
        return misuse("needs a stream of classes, methods, fields or modifiers");
      auto arg = nameArg(link);
      if (!arg) return false;
      static const char* preds[] = {"isPublic", "isProtected", "isPrivate", "isStatic",
                                    "isFinal"};
      if (std::find_if(std::begin(preds), std::end(preds), [&](const char* p) {
            return arg->first == p;
          }) == std::end(preds))
        return misuse("got unknown predicate '" + arg->first + "'");
      VType::Tag elem = cur.inner;
      wrap(n == "filter" ? QueryOp::Filter : QueryOp::AnyMatch);
      current->name = arg->first;
      current->nameProvenance = arg->second;
      cur = n == "filter" ? VType::stream(elem) : VType::of(VType::Bool);
      return true;
    }
    if (n == "map") {
      if (cur.tag != VType::Stream) return misuse("applies to streams only");
      auto arg = nameArg(link);
      if (!arg) return false;
      VType::Tag elem = cur.inner;
      VType result;
      if (arg->first == "getName" && (elem == VType::ClassE || elem == VType::MethodE ||
                                      elem == VType::FieldE || elem == VType::FileE ||
                                      elem == VType::ConfigE))
        result = VType::stream(VType::Str);
      else if (arg->first == "getModifiers" &&
               (elem == VType::ClassE || elem == VType::MethodE || elem == VType::FieldE))
        result = VType::stream(VType::Mods);
      else if (arg->first == "getMethods" && elem == VType::ClassE)
        result = VType::stream(VType::MethodE);
      else if (arg->first == "getFields" && elem == VType::ClassE)
        result = VType::stream(VType::FieldE);
      else
        return misuse("cannot map '" + arg->first + "' over this stream");
      wrap(QueryOp::Map);
      current->name = arg->first;
      current->nameProvenance = arg->second;
      cur = result;
      return true;
    }
    if (n == "count") {
      if (cur.tag != VType::Stream) return misuse("applies to streams only");
      if (!expectNoArgs(link)) return false;
      wrap(QueryOp::Count);
      cur = VType::of(VType::Num);
      return true;
    }
    if (n == "findAny") {
      if (cur.tag != VType::Stream || cur.inner == VType::Str || cur.inner == VType::Mods)
        return misuse("applies to streams of named elements");
      auto arg = nameArg(link);
      if (!arg) return false;
      VType::Tag elem = cur.inner;
      wrap(QueryOp::FindAny);
      current->name = arg->first;
      current->nameProvenance = arg->second;
      cur = VType::optional(elem);
      return true;
    }
    if (n == "isPresent") {
      if (cur.tag != VType::Optional) return misuse("applies to findAny results only");
      if (!expectNoArgs(link)) return false;
      wrap(QueryOp::IsPresent);
      cur = VType::of(VType::Bool);
      return true;
    }
    if (n == "getName") {
      VType::Tag elem = cur.tag == VType::Optional ? cur.inner : cur.tag;
      if (!(cur.isElem() || (cur.tag == VType::Optional)))
        return misuse("applies to model elements");
      (void)elem;
      if (!expectNoArgs(link)) return false;
      wrap(QueryOp::GetName);
      cur = VType::of(VType::Str);
      return true;
    }
    if (n == "getModifiers") {
      VType::Tag elem = cur.tag == VType::Optional ? cur.inner : cur.tag;
      if (!(elem == VType::ClassE || elem == VType::MethodE || elem == VType::FieldE))
        return misuse("applies to classes, methods and fields");
      if (!expectNoArgs(link)) return false;
      wrap(QueryOp::GetModifiers);
      cur = VType::of(VType::Mods);
      return true;
    }
    if (n == "getMethods" || n == "getFields") {
      VType::Tag elem = cur.tag == VType::Optional ? cur.inner : cur.tag;
      if (elem != VType::ClassE) return misuse("applies to class elements");
      if (!expectNoArgs(link)) return false;
      wrap(n == "getMethods" ? QueryOp::GetMethods : QueryOp::GetFields);
      cur = VType::stream(n == "getMethods" ? VType::MethodE : VType::FieldE);
      return true;
    }
    if (n == "getMethod" || n == "getField") {
      VType::Tag elem = cur.tag == VType::Optional ? cur.inner : cur.tag;
      if (elem != VType::ClassE) return misuse("applies to class elements");
      auto arg = nameArg(link);
      if (!arg) return false;
      wrap(n == "getMethod" ? QueryOp::GetMethod : QueryOp::GetField);
      current->name = arg->first;
      current->nameProvenance = arg->second;
      cur = VType::of(n == "getMethod" ? VType::MethodE : VType::FieldE);
      return true;
    }
    if (n == "getJavaVersion") {
      if (cur.tag != VType::ConfigE) return misuse("applies to build configurations");
      if (!expectNoArgs(link)) return false;
      wrap(QueryOp::GetJavaVersion);
      cur = VType::of(VType::Version);
      return true;
    }
    if (n == "isPublic" || n == "isProtected" || n == "isPrivate" || n == "isStatic" ||
        n == "isFinal") {
      VType::Tag elem = cur.tag == VType::Optional ? cur.inner : cur.tag;
      if (!predicateApplies(elem)) return misuse("applies to classes, methods and fields");
      if (!expectNoArgs(link)) return false;
      QueryOp op = n == "isPublic"      ? QueryOp::IsPublic
                   : n == "isProtected" ? QueryOp::IsProtected
                   : n == "isPrivate"   ? QueryOp::IsPrivate
                   : n == "isStatic"    ? QueryOp::IsStatic
                                        : QueryOp::IsFinal;
      wrap(op);
      cur = VType::of(VType::Bool);
      return true;
    }
    if (n == "greaterEqualThan") {
      if (cur.tag != VType::Version) return misuse("applies to Java versions");
      if (link.children.size() != 1) return misuse("expects one version argument");
      VType argType;
      QueryNodePtr arg = compileExpr(*link.children[0], argType);
      if (!arg) return false;
      if (argType.tag != VType::Version)
        return misuse("expects a version constant (TrigIt.JAVA5..JAVA9)");
      auto node = mk(QueryOp::GreaterEqualThan, link.span);
      node->children.push_back(std::move(current));
      node->children.push_back(std::move(arg));
      current = std::move(node);
      cur = VType::of(VType::Bool);
      return true;
    }
    if (n == "equals") {
      if (!(cur.tag == VType::Str || cur.tag == VType::Num || cur.tag == VType::Bool))
        return misuse("applies to names, counts and booleans");
      if (link.children.size() != 1) return misuse("expects one literal argument");
      VType argType;
      QueryNodePtr arg = compileExpr(*link.children[0], argType);
      if (!arg) return false;
      if (argType.tag != cur.tag)
        return misuse("argument type does not match the receiver");
      auto node = mk(QueryOp::Equals, link.span);
      node->children.push_back(std::move(current));
      node->children.push_back(std::move(arg));
      current = std::move(node);
      cur = VType::of(VType::Bool);
      return true;
    }
    return misuse("is not a known TrigIt API member");
  }

  // --- actions ---

  std::optional<ActionStep> compileActionStmt(const AstNode& stmt) {
    const AstNode& chain = *stmt.children[0];
    if (isPrintChain(chain)) return compilePrint(stmt, chain);

    ActionStep step;
    step.kind = ActionStep::Kind::Mutation;
    step.span = stmt.span;

    std::size_t i = 1;
    auto selectorName = [&](const AstNode& link) -> std::optional<std::string> {
      auto arg = nameArg(link);
      if (!arg) return std::nullopt;
      return arg->first;
    };

    if (i < chain.children.size() && chain.children[i]->text == "getClass" &&
        chain.children[i]->isCall) {
      auto name = selectorName(*chain.children[i]);
      if (!name) return std::nullopt;
      step.target.className = *name;
      ++i;
    }
    if (i < chain.children.size() &&
        (chain.children[i]->text == "getMethod" || chain.children[i]->text == "getField") &&
        chain.children[i]->isCall) {
      auto name = selectorName(*chain.children[i]);
      if (!name) return std::nullopt;
      if (chain.children[i]->text == "getMethod") step.target.methodName = *name;
      else step.target.fieldName = *name;
      ++i;
    }
    if (i >= chain.children.size()) {
      error(EncodingErrorCategory::BadBodyShape, chain.span,
            "transformation statement is missing its mutation call");
      return std::nullopt;
    }
    if (!step.target.className && !step.target.methodName && !step.target.fieldName) {
      error(EncodingErrorCategory::UnknownApi, chain.children[i]->span,
            "transformation statement needs a getClass/getMethod/getField selector");
      return std::nullopt;
    }

    const AstNode& mut = *chain.children[i];
    if (!mut.isCall) {
      error(EncodingErrorCategory::UnknownApi, mut.span,
            "'" + mut.text + "' is not a mutation call");
      return std::nullopt;
    }
    const std::string& m = mut.text;
    if (m == "setPublic" || m == "setProtected" || m == "setPrivate") {
      if (!expectNoArgs(mut)) return std::nullopt;
      step.mutation = m == "setPublic"      ? MutationKind::SetPublic
                      : m == "setProtected" ? MutationKind::SetProtected
                                            : MutationKind::SetPrivate;
    } else if (m == "setStatic" || m == "setFinal") {
      if (mut.children.size() != 1 || mut.children[0]->kind != NodeKind::Literal ||
          (mut.children[0]->text != "true" && mut.children[0]->text != "false")) {
        error(EncodingErrorCategory::UnknownApi, mut.span,
              "'" + m + "' expects a boolean literal argument");
        return std::nullopt;
      }
      step.mutation = m == "setStatic" ? MutationKind::SetStatic : MutationKind::SetFinal;
      step.flagValue = mut.children[0]->text == "true";
    } else if (m == "removeMethod") {
      if (!expectNoArgs(mut)) return std::nullopt;
      if (!step.target.methodName) {
        error(EncodingErrorCategory::UnknownApi, mut.span,
              "removeMethod requires a getMethod selector");
        return std::nullopt;
      }
      step.mutation = MutationKind::RemoveMethod;
    } else if (m == "removeField") {
      if (!expectNoArgs(mut)) return std::nullopt;
      if (!step.target.fieldName) {
        error(EncodingErrorCategory::UnknownApi, mut.span,
              "removeField requires a getField selector");
        return std::nullopt;
      }
      step.mutation = MutationKind::RemoveField;
    } else {
      error(EncodingErrorCategory::UnknownApi, mut.span,
            "unknown mutation '" + m + "'");
      return std::nullopt;
    }
    if (i + 1 != chain.children.size()) {
      error(EncodingErrorCategory::BadBodyShape, chain.children[i + 1]->span,
            "nothing may follow a mutation call");
      return std::nullopt;
    }
    return step;
  }

  std::optional<ActionStep> compilePrint(const AstNode& stmt, const AstNode& chain) {
    // System.out.println(...) / System.err.print(...)
    bool shapeOk = chain.children.size() == 3 &&
                   chain.children[1]->kind == NodeKind::MemberAccess &&
                   !chain.children[1]->isCall &&
                   (chain.children[1]->text == "out" || chain.children[1]->text == "err") &&
                   chain.children[2]->isCall &&
                   (chain.children[2]->text == "println" || chain.children[2]->text == "print");
    if (!shapeOk) {
      error(EncodingErrorCategory::BadBodyShape, chain.span,
            "print statements must be System.out/err.print or println calls");
      return std::nullopt;
    }
    ActionStep step;
    step.kind = ActionStep::Kind::Print;
    step.span = stmt.span;
    const AstNode& call = *chain.children[2];
    if (call.children.size() == 1 && call.children[0]->kind == NodeKind::Literal &&
        !call.children[0]->text.empty() && call.children[0]->text[0] == '"') {
      step.message = decodeStringLiteral(call.children[0]->text);
    } else {
      std::string msg;
      for (std::size_t a = 0; a < call.children.size(); ++a) {
        if (a) msg += ", ";
        msg += renderExpr(*call.children[a]);
      }
      step.message = msg;
    }
    return step;
  }
};

}  // namespace

CompileResult compileUnit(const TrigItMethodRef& ref, const ValidatedMethod& validated) {
  CompileResult result;
  Compiler compiler{ref, result.errors};

  VType rootType;
  QueryNodePtr query = compiler.compileExpr(*validated.queryExpr, rootType);
  if (query && rootType.tag != VType::Bool) {
    compiler.error(EncodingErrorCategory::BadBodyShape, validated.queryExpr->span,
                   "query expression must produce a boolean value");
    query = nullptr;
  }

  std::vector<ActionStep> steps;
  for (const AstNode* stmt : validated.actionStmts) {
    if (auto step = compiler.compileActionStmt(*stmt)) steps.push_back(std::move(*step));
  }

  if (!result.errors.empty()) return result;

  TrigItUnit unit;
  unit.methodName = declNameOf(*ref.methodDecl)->text;
  unit.enclosingClass = ref.classQualifiedName;
  unit.file = ref.file->path;
  unit.kind = validated.kind;
  unit.query = std::move(query);
  unit.actions = std::move(steps);
  unit.declSpan = ref.methodDecl->span;
  unit.querySpan = validated.queryExpr->span;
  result.unit = std::move(unit);
  return result;
}

std::vector<GuardSite> findGuardSites(const ProjectBuild& build,
                                      const std::string& triggerName) {
  std::vector<GuardSite> sites;

  auto condMatch = [&](const AstNode& cond, bool& negated) -> bool {
    const AstNode* c = &cond;
    negated = false;
    if (c->kind == NodeKind::LogicExpr && c->text == "!") {
      negated = true;
      c = c->children[0].get();
    }
    return c->kind == NodeKind::CallChain && c->children.size() == 1 &&
           c->children[0]->kind == NodeKind::MemberAccess && c->children[0]->isCall &&
           c->children[0]->children.empty() && c->children[0]->text == triggerName;
  };

  for (const ParsedFile& file : build.files) {
    visit(*file.unit.root, [&](const AstNode& n) {
      if (n.kind == NodeKind::MethodDecl && hasAnnotation(n, "TrigItMethod"))
        return false;  // TrigIt bodies cannot host guard sites
      if (n.kind != NodeKind::IfStmt) return true;
      bool negated = false;
      if (!condMatch(*n.children[0], negated)) return true;
      GuardSite site;
      site.file = file.path;
      site.ifSpan = n.span;
      site.trigger = triggerName;
      site.negated = negated;
      site.condSpan = n.children[0]->span;
      site.thenSpan = n.children[1]->span;
      if (n.children.size() > 2) {
        site.hasElse = true;
        site.elseSpan = n.children[2]->span;
      }
      sites.push_back(std::move(site));
      return true;
    });
  }
  return sites;
}

FrontendResult runFrontend(const ProjectBuild& build) {
  FrontendResult out;
  std::vector<TrigItMethodRef> refs = collectTrigItMethods(build);

  std::vector<std::string> triggerNames;
  for (const TrigItMethodRef& ref : refs)
    if (declTypeOf(*ref.methodDecl)->text == "boolean")
      triggerNames.push_back(declNameOf(*ref.methodDecl)->text);

  // Strip every top-level class (cheap) to surface unreachable nested units;
  // keep rewritten text only for classes that actually host units.
  struct ClassWork {
    const ParsedFile* file;
    const AstNode* original;
    StripResult strip;
    std::vector<TextEdit> substitutions;
    bool hasUnits = false;
    std::string qualifiedName;
  };
  std::vector<ClassWork> work;
  for (const ParsedFile& file : build.files) {
    for (const AstNodePtr& top : file.unit.root->children) {
      if (top->kind != NodeKind::ClassDecl) continue;
      ClassWork w;
      w.file = &file;
      w.original = top.get();
      w.strip = stripForEvaluation(*top);
      w.qualifiedName = file.unit.packageName.empty()
                            ? declNameOf(*top)->text
                            : file.unit.packageName + "." + declNameOf(*top)->text;
      for (const std::string& d : w.strip.diagnostics)
        out.diagnostics.push_back(file.path + ": " + d);
      work.push_back(std::move(w));
    }
  }
  auto workFor = [&](const TrigItMethodRef& ref) -> ClassWork& {
    for (ClassWork& w : work)
      if (w.original == ref.classDecl) return w;
    throw std::logic_error("class work missing");
  };

  for (const TrigItMethodRef& ref : refs) {
    ClassWork& w = workFor(ref);
    w.hasUnits = true;

    // Locate the clone of this method inside the stripped class.
    AstNode* cloneMethod = nullptr;
    for (const AstNodePtr& c : w.strip.classDecl->children)
      if (c->kind == NodeKind::MethodDecl && c->span.begin == ref.methodDecl->span.begin)
        cloneMethod = c.get();
    TrigItMethodRef cloneRef = ref;
    cloneRef.methodDecl = cloneMethod;

    ValidationResult validation = validateTrigItMethod(cloneRef);
    if (!validation.valid) {
      for (EncodingError& e : validation.errors) out.errors.push_back(std::move(e));
      continue;
    }

    // Substitute names in place, re-deriving the mutable expression slots.
    SubstitutionContext ctx{declNameOf(*ref.classDecl)->text, triggerNames};
    AstNode* body = const_cast<AstNode*>(bodyOf(*cloneMethod));
    AstNode& stmt0 = *body->children[0];
    std::vector<TextEdit> subEdits;
    if (validation.valid->kind == UnitKind::Trigger) {
      auto edits = nameSubstitute(stmt0.children[0], ctx);
      subEdits.insert(subEdits.end(), edits.begin(), edits.end());
    } else {
      auto edits = nameSubstitute(stmt0.children[0], ctx);  // if condition
      subEdits.insert(subEdits.end(), edits.begin(), edits.end());
      AstNode& thenBranch = *stmt0.children[1];
      std::vector<AstNode*> stmts;
      if (thenBranch.kind == NodeKind::Block)
        for (AstNodePtr& s : thenBranch.children) stmts.push_back(s.get());
      else
        stmts.push_back(&thenBranch);
      for (AstNode* s : stmts) {
        if (s->kind != NodeKind::ExprStmt) continue;
        auto stepEdits = nameSubstitute(s->children[0], ctx);
        subEdits.insert(subEdits.end(), stepEdits.begin(), stepEdits.end());
      }
    }
    w.substitutions.insert(w.substitutions.end(), subEdits.begin(), subEdits.end());

    // Re-validate on the substituted tree to pick up the final expr pointers.
    ValidationResult revalidated = validateTrigItMethod(cloneRef);
    if (!revalidated.valid) {
      for (EncodingError& e : revalidated.errors) out.errors.push_back(std::move(e));
      continue;
    }
    CompileResult compiled = compileUnit(cloneRef, *revalidated.valid);
    if (!compiled.unit) {
      for (EncodingError& e : compiled.errors) out.errors.push_back(std::move(e));
      continue;
    }
    TrigItUnit unit = std::move(*compiled.unit);
    if (unit.kind == UnitKind::Trigger) {
      unit.guardSites = findGuardSites(build, unit.methodName);
      if (unit.guardSites.empty())
        out.diagnostics.push_back("unused trigger " + unit.displayName() +
                                  " (no guard sites reference it)");
    }
    out.units.push_back(std::move(unit));
  }

  for (ClassWork& w : work) {
    if (!w.hasUnits) continue;
    std::string fileText = sourceOfUnit(w.file->unit);
    std::size_t base = w.original->span.begin;
    std::string classText =
        fileText.substr(base, w.original->span.end - base);
    std::vector<TextEdit> edits;
    for (const Span& s : w.strip.removedMemberSpans) {
      TextEdit e;
      e.span = s;
      e.span.begin -= base;
      e.span.end -= base;
      edits.push_back(std::move(e));
    }
    for (const TextEdit& s : w.substitutions) {
      TextEdit e = s;
      e.span.begin -= base;
      e.span.end -= base;
      edits.push_back(std::move(e));
    }
    out.strippedClasses.push_back(
        {w.qualifiedName, w.file->path, applyTextEdits(classText, edits)});
  }
  return out;
}

}  // namespace trigit
