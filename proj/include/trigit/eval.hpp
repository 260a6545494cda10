#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trigit/frontend.hpp"
#include "trigit/ir.hpp"
#include "trigit/model.hpp"

namespace trigit {

struct Evidence {
  std::string file;
  int line = 0;
};

struct TriggerResult {
  std::string unit;
  bool satisfied = false;
  bool unevaluable = false;  // encoding errors blocked this unit
  std::string explanation;   // "<reason>; file: <path>, line: <n>" with evidence
  std::optional<Evidence> evidence;
};

enum class EditOrigin { ExplicitAction, GuardFold, MethodRemoval, CallsiteFold };

const char* editOriginName(EditOrigin o);

struct Edit {
  std::string file;
  Span span;
  std::string replacement;
  EditOrigin origin = EditOrigin::ExplicitAction;
  std::string unit;
};

// Accumulates edits, rejecting overlaps within a file so the set stays
// atomically appliable.
class EditSet {
 public:
  // False when the edit overlaps an already accepted one (it is dropped).
  bool add(Edit edit);
  const std::vector<Edit>& edits() const { return edits_; }
  bool empty() const { return edits_.empty(); }
  std::size_t size() const { return edits_.size(); }

 private:
  std::vector<Edit> edits_;
};

struct Patch {
  std::string text;
  int filesTouched = 0;
  int hunks = 0;
};

struct Timings {
  long long modelMs = 0;
  long long evaluateMs = 0;
  long long actionMs = 0;
  long long renderMs = 0;
};

struct RunReport {
  std::vector<TriggerResult> triggers;  // one per compiled unit, in order
  std::vector<EncodingError> errors;
  std::vector<std::string> diagnostics;
  EditSet edits;
  Timings timings;

  bool anySatisfied() const;
};

enum class RunMode { Notify, Fold, Patch };

struct EvalOptions {
  RunMode mode = RunMode::Notify;
  bool assumeTrue = false;
  bool noAction = false;
  bool debug = false;
};

// Pure interpretation of one compiled query over the model.
TriggerResult evalQuery(const QueryNode& ir, const ProjectModel& model,
                        const std::string& contextClass, const std::string& unitName);

// Resolves every fixed-name selector of the unit against the model.
// Existence tests (hasClass, findAny) are exempt. Simple-name ambiguity
// across packages is a warning, not an error.
std::vector<EncodingError> checkEncoding(const TrigItUnit& unit, const ProjectModel& model,
                                         std::vector<std::string>* warnings = nullptr);

// Turns each mutation step of a satisfied action unit into source edits.
// No-op mutations (already private, ...) contribute diagnostics instead.
std::vector<Edit> executeActions(const TrigItUnit& unit, const ProjectModel& model,
                                 const ProjectBuild& build,
                                 std::vector<std::string>* diagnostics);

// Folds guard sites of a trigger evaluated to `value`: the surviving branch
// replaces the whole if statement; a false guard with no else deletes it.
std::vector<Edit> foldGuards(const std::vector<GuardSite>& sites, bool value,
                             const ProjectBuild& build, const std::string& unitName);

// One deletion edit per satisfied unit (annotation + method + leading trivia).
std::vector<Edit> removeSatisfiedUnits(const std::vector<TrigItUnit>& units,
                                       const std::vector<TriggerResult>& results,
                                       const ProjectBuild& build);

// Renders the accumulated edits as one unified diff over the originals.
Patch renderPatch(const EditSet& edits, const ProjectBuild& build);

// Applies the edits directly: path -> new content, for every file (also the
// untouched ones, so fold mode can mirror the tree).
std::map<std::string, std::string> materializeEdits(const EditSet& edits,
                                                    const ProjectBuild& build);

struct EvalOutput {
  RunReport report;
  std::optional<Patch> patch;                      // RunMode::Patch
  std::map<std::string, std::string> transformed;  // RunMode::Fold
};

// The full pipeline after compilation: encoding checks first, then all
// evaluations, then (mode permitting) deferred edits and rendering.
EvalOutput evaluateAll(const ProjectBuild& build, const FrontendResult& frontend,
                       const EvalOptions& options);

}  // namespace trigit
