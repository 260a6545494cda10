#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trigit/ast.hpp"

namespace trigit {

// Interpreted form of a query expression. Chains compile to nested nodes with
// the receiver as children[0]; logic operators hold their operands directly.
enum class QueryOp {
  // sources
  SourceClasses,
  SourceJavaFiles,
  SourceBuildConfigs,
  // stream operations
  Filter,    // name = predicate
  Map,       // name = accessor; collection-valued accessors flatten
  Count,
  AnyMatch,  // name = predicate
  FindAny,   // name = element name to match against getName()
  // accessors
  GetName,
  GetModifiers,
  GetFields,
  GetMethods,
  GetClass,    // name; no receiver (rooted at the API object)
  HasClass,    // name; existence test, exempt from encoding checks
  GetMethod,   // name; receiver optional (absent = enclosing class)
  GetField,    // name; receiver optional (absent = enclosing class)
  GetJavaVersion,
  // predicates
  IsPresent,
  IsPublic,
  IsProtected,
  IsPrivate,
  IsStatic,
  IsFinal,
  GreaterEqualThan,  // children = [receiver, version constant]
  Equals,            // children = [receiver, literal]
  // logic
  And,
  Or,
  Not,
  // literals
  LiteralString,
  LiteralNumber,
  LiteralBool,
  VersionConst,  // versionMajor 5..9
};

const char* queryOpName(QueryOp op);

struct QueryNode {
  QueryOp op;
  std::string name;  // selector / predicate / accessor / string value
  LiteralProvenance nameProvenance = LiteralProvenance::SourceLiteral;
  double number = 0.0;
  bool boolean = false;
  int versionMajor = 0;
  Span span;
  std::vector<std::unique_ptr<QueryNode>> children;
};
using QueryNodePtr = std::unique_ptr<QueryNode>;

enum class MutationKind {
  SetPublic,
  SetProtected,
  SetPrivate,
  SetStatic,   // flagValue carries the argument
  SetFinal,    // flagValue carries the argument
  RemoveMethod,
  RemoveField,
};

const char* mutationName(MutationKind m);

// Fully name-resolved action target: a class/method/field path of literals.
struct TargetSelector {
  std::optional<std::string> className;  // absent = enclosing class
  std::optional<std::string> methodName;
  std::optional<std::string> fieldName;
};

struct ActionStep {
  enum class Kind { Mutation, Print };
  Kind kind = Kind::Mutation;
  TargetSelector target;
  MutationKind mutation = MutationKind::SetPublic;
  bool flagValue = false;
  std::string message;  // Print
  Span span;            // source span of the statement
};

struct GuardSite {
  std::string file;
  Span ifSpan;
  std::string trigger;
  bool negated = false;
  bool hasElse = false;
  Span thenSpan;
  std::optional<Span> elseSpan;
  Span condSpan;
};

enum class EncodingErrorCategory {
  BadSignature,
  BadBodyShape,
  UnknownApi,
  MissingReferent,
  Ambiguous,
};

const char* encodingErrorCategoryName(EncodingErrorCategory c);

struct EncodingError {
  std::string unit;  // qualified class + '.' + method
  std::string file;
  Span location;
  EncodingErrorCategory category;
  std::string message;
};

enum class UnitKind { Trigger, Action };

// One validated and compiled @TrigItMethod.
struct TrigItUnit {
  std::string methodName;
  std::string enclosingClass;  // qualified name
  std::string file;
  UnitKind kind = UnitKind::Trigger;
  QueryNodePtr query;
  std::vector<ActionStep> actions;  // empty for triggers
  std::vector<std::string> diagnostics;
  Span declSpan;   // annotations through body
  Span querySpan;  // span of the query expression in the source
  std::vector<GuardSite> guardSites;  // triggers only

  std::string displayName() const { return enclosingClass + "." + methodName; }
};

}  // namespace trigit
