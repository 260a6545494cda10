#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "trigit/eval.hpp"

namespace trigit {

enum class ReportFormat { Text, Json };

// Options of the run/check pipeline, assembled from the command line.
struct RunOptions {
  RunMode mode = RunMode::Notify;
  bool debug = false;
  bool assumeTrue = false;
  bool noAction = false;
  bool lenient = false;
  std::filesystem::path sourceRoot;
  std::filesystem::path outDir;     // required by fold mode
  std::filesystem::path patchPath;  // required by patch mode
  ReportFormat format = ReportFormat::Text;
};

// Token-count triple of one unit under the frozen counting rule: pure
// punctuation (. , ( ) { } ;) and the TrigIt root identifier never count.
struct TokenComplexity {
  std::string unit;
  int structureTokens = 0;
  int triggerTokens = 0;
  int actionTokens = 0;
  int totalTokens = 0;  // structure + trigger + action
};

std::vector<TokenComplexity> tokenComplexities(const ProjectBuild& build,
                                               const FrontendResult& frontend);

// JSON rendering of the run report (the shape is pinned by
// schemas/report.schema.json).
std::string reportToJson(const RunReport& report);

// Exit codes: 0 no satisfied trigger, 1 satisfied trigger(s), 2 encoding
// errors, 3 parse/config errors in strict mode, 4 IO/usage; highest wins.
int trigitMain(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err);

}  // namespace trigit
