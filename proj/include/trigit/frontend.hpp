#pragma once

#include <string>
#include <vector>

#include "trigit/ir.hpp"
#include "trigit/model.hpp"
#include "trigit/printer.hpp"

namespace trigit {

struct TrigItMethodRef {
  const ParsedFile* file = nullptr;
  const AstNode* classDecl = nullptr;
  const AstNode* methodDecl = nullptr;
  std::string classQualifiedName;
};

// Every @TrigItMethod in (file path, declaration) order. Methods inside
// nested classes are excluded here; stripping reports them as unreachable.
std::vector<TrigItMethodRef> collectTrigItMethods(const ProjectBuild& build);

struct ValidatedMethod {
  UnitKind kind = UnitKind::Trigger;
  const AstNode* queryExpr = nullptr;            // return expr / leading if condition
  std::vector<const AstNode*> actionStmts;       // then-branch statements (actions)
};

struct ValidationResult {
  std::optional<ValidatedMethod> valid;  // set iff errors is empty
  std::vector<EncodingError> errors;     // all violations, not just the first
};

ValidationResult validateTrigItMethod(const TrigItMethodRef& ref);

// Rewrite preparation: removes static blocks, fields, nested classes and
// non-annotated methods until only @TrigItMethod members remain. Member
// removal applies outside-in, so nested classes vanish wholesale; annotated
// methods trapped inside them are reported as unreachable.
struct StripResult {
  AstNodePtr classDecl;
  std::vector<Span> removedMemberSpans;  // for debug rendering
  std::vector<std::string> diagnostics;
};

StripResult stripForEvaluation(const AstNode& classDecl);

struct SubstitutionContext {
  std::string enclosingClass;             // simple name
  std::vector<std::string> triggerNames;  // declared boolean TrigIt methods
};

// Replaces every project field access / method invocation in `expr` with a
// string literal of its simple name (arguments discarded). Chains rooted at
// the TrigIt API, at a declared trigger call, or at System.* print calls stay
// intact, though substitution still applies inside their argument lists.
// Returns the text replacements performed, for debug rendering. Idempotent.
std::vector<TextEdit> nameSubstitute(AstNodePtr& expr, const SubstitutionContext& ctx);

struct CompileResult {
  std::optional<TrigItUnit> unit;
  std::vector<EncodingError> errors;
};

// Compiles a validated, name-substituted method into a TrigItUnit. Unknown
// API names and malformed chains produce UNKNOWN_API / BAD_BODY_SHAPE errors.
CompileResult compileUnit(const TrigItMethodRef& ref, const ValidatedMethod& validated);

// Every `if` whose condition is a call to `triggerName`, optionally under one
// `!`, across all files, excluding bodies of TrigIt methods themselves.
std::vector<GuardSite> findGuardSites(const ProjectBuild& build,
                                      const std::string& triggerName);

struct StrippedClassText {
  std::string qualifiedName;
  std::string file;
  std::string text;  // post-rewrite class source (members removed, names substituted)
};

struct FrontendResult {
  std::vector<TrigItUnit> units;
  std::vector<EncodingError> errors;
  std::vector<std::string> diagnostics;
  std::vector<StrippedClassText> strippedClasses;
};

// collect -> strip -> validate -> substitute -> compile -> locate guard
// sites, in deterministic order.
FrontendResult runFrontend(const ProjectBuild& build);

}  // namespace trigit
