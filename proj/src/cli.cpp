#include "trigit/cli.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "trigit/classifier.hpp"
#include "trigit/frontend.hpp"
#include "trigit/miner.hpp"
#include "trigit/printer.hpp"

namespace trigit {

namespace {

constexpr int kExitClean = 0;
constexpr int kExitSatisfied = 1;
constexpr int kExitEncodingErrors = 2;
constexpr int kExitSourceErrors = 3;
constexpr int kExitUsage = 4;

bool colorEnabled(const std::ostream& out) {
  if (std::getenv("TRIGIT_NO_COLOR") != nullptr) return false;
  return &out == &std::cout && isatty(fileno(stdout));
}

struct Style {
  bool on = false;
  std::string red(const std::string& s) const { return on ? "\033[31m" + s + "\033[0m" : s; }
  std::string yellow(const std::string& s) const { return on ? "\033[33m" + s + "\033[0m" : s; }
  std::string green(const std::string& s) const { return on ? "\033[32m" + s + "\033[0m" : s; }
  std::string bold(const std::string& s) const { return on ? "\033[1m" + s + "\033[0m" : s; }
};

int exitCodeFor(const RunReport& report, bool strictFailed) {
  if (strictFailed) return kExitSourceErrors;
  if (!report.errors.empty()) return kExitEncodingErrors;
  if (report.anySatisfied()) return kExitSatisfied;
  return kExitClean;
}

void printSourceErrors(const ProjectBuild& build, std::ostream& err) {
  for (const SourceError& e : build.parseErrors)
    err << e.file << ":" << e.line << ":" << e.column << ": " << e.message << "\n";
  for (const SourceError& e : build.configErrors)
    err << e.file << ": " << e.message << "\n";
}

void printTextReport(const RunReport& report, std::ostream& out, const Style& style) {
  out << style.bold("TrigIt report") << "\n";
  out << "  triggers (" << report.triggers.size() << "):\n";
  for (const TriggerResult& t : report.triggers) {
    std::string state = t.unevaluable ? style.red("[UNEVALUABLE]")
                        : t.satisfied ? style.yellow("[SATISFIED]")
                                      : "[pending]";
    out << "    " << state << " " << t.unit << ": " << t.explanation << "\n";
  }
  out << "  encoding errors (" << report.errors.size() << "):\n";
  for (const EncodingError& e : report.errors)
    out << "    " << style.red(encodingErrorCategoryName(e.category)) << " " << e.unit
        << " at " << e.file << ":" << e.location.line << ": " << e.message << "\n";
  out << "  diagnostics (" << report.diagnostics.size() << "):\n";
  for (const std::string& d : report.diagnostics) out << "    " << d << "\n";
  out << "  edits (" << report.edits.size() << "):\n";
  for (const Edit& e : report.edits.edits())
    out << "    " << e.file << ":" << e.span.line << "-" << e.span.endLine << " "
        << editOriginName(e.origin) << " (" << e.unit << ")\n";
  out << "  timings: model " << report.timings.modelMs << " ms, evaluate "
      << report.timings.evaluateMs << " ms, action " << report.timings.actionMs
      << " ms, render " << report.timings.renderMs << " ms\n";
}

}  // namespace

std::string reportToJson(const RunReport& report) {
  nlohmann::json j;
  j["triggers"] = nlohmann::json::array();
  for (const TriggerResult& t : report.triggers) {
    nlohmann::json jt;
    jt["unit"] = t.unit;
    jt["satisfied"] = t.satisfied;
    jt["explanation"] = t.explanation;
    if (t.evidence) {
      jt["evidence"] = {{"file", t.evidence->file}, {"line", t.evidence->line}};
    } else {
      jt["evidence"] = nullptr;
    }
    j["triggers"].push_back(std::move(jt));
  }
  j["errors"] = nlohmann::json::array();
  for (const EncodingError& e : report.errors) {
    j["errors"].push_back({{"unit", e.unit},
                           {"category", encodingErrorCategoryName(e.category)},
                           {"file", e.file},
                           {"line", e.location.line},
                           {"message", e.message}});
  }
  j["edits"] = nlohmann::json::array();
  for (const Edit& e : report.edits.edits()) {
    j["edits"].push_back({{"file", e.file},
                          {"origin", editOriginName(e.origin)},
                          {"startLine", e.span.line},
                          {"endLine", e.span.endLine}});
  }
  j["diagnostics"] = report.diagnostics;
  j["timings_ms"] = {{"model", report.timings.modelMs},
                     {"evaluate", report.timings.evaluateMs},
                     {"action", report.timings.actionMs},
                     {"render", report.timings.renderMs}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// token complexity

namespace {

bool countableToken(const Token& t) {
  if (t.kind == TokenKind::EndOfFile) return false;
  if (t.kind == TokenKind::Punctuation) {
    static const std::string pure = ".,(){};";
    if (t.text.size() == 1 && pure.find(t.text[0]) != std::string::npos) return false;
  }
  return t.text != "TrigIt";
}

int countTokensIn(const std::vector<Token>& tokens, const Span& span) {
  int count = 0;
  for (const Token& t : tokens) {
    if (t.span.begin < span.begin) continue;
    if (t.span.begin >= span.end) break;
    if (countableToken(t)) ++count;
  }
  return count;
}

const ParsedFile* findFile(const ProjectBuild& build, const std::string& path) {
  for (const ParsedFile& f : build.files)
    if (f.path == path) return &f;
  return nullptr;
}

}  // namespace

std::vector<TokenComplexity> tokenComplexities(const ProjectBuild& build,
                                               const FrontendResult& frontend) {
  std::vector<TokenComplexity> rows;
  for (const TrigItUnit& unit : frontend.units) {
    const ParsedFile* pf = findFile(build, unit.file);
    if (!pf) continue;
    TokenComplexity row;
    row.unit = unit.displayName();
    int declTokens = countTokensIn(pf->unit.tokens, unit.declSpan);
    row.triggerTokens = countTokensIn(pf->unit.tokens, unit.querySpan);
    if (unit.kind == UnitKind::Action) {
      for (const ActionStep& step : unit.actions)
        row.actionTokens += countTokensIn(pf->unit.tokens, step.span);
    } else {
      for (const GuardSite& site : unit.guardSites) {
        const ParsedFile* siteFile = findFile(build, site.file);
        if (siteFile) row.actionTokens += countTokensIn(siteFile->unit.tokens, site.condSpan);
      }
    }
    int explicitActionTokens = unit.kind == UnitKind::Action ? row.actionTokens : 0;
    row.structureTokens = declTokens - row.triggerTokens - explicitActionTokens;
    row.totalTokens = row.structureTokens + row.triggerTokens + row.actionTokens;
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// subcommands

namespace {

struct Pipeline {
  ProjectBuild build;
  FrontendResult frontend;
  bool strictFailed = false;
  long long modelMs = 0;
};

Pipeline runPipeline(const RunOptions& options, std::ostream& err) {
  using Clock = std::chrono::steady_clock;
  Pipeline p;
  auto t0 = Clock::now();
  p.build = buildProjectModel(options.sourceRoot);
  p.modelMs =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
  bool sourceErrors = !p.build.parseErrors.empty() || !p.build.configErrors.empty();
  if (sourceErrors && !options.lenient) {
    printSourceErrors(p.build, err);
    p.strictFailed = true;
    return p;
  }
  p.frontend = runFrontend(p.build);
  if (options.lenient) {
    for (const SourceError& e : p.build.parseErrors)
      p.frontend.diagnostics.push_back("lenient: skipped " + e.file + ":" +
                                       std::to_string(e.line) + " (" + e.message + ")");
    for (const SourceError& e : p.build.configErrors)
      p.frontend.diagnostics.push_back("lenient: build config " + e.file + " ignored (" +
                                       e.message + ")");
  }
  for (const std::string& w : p.build.warnings) p.frontend.diagnostics.push_back(w);
  return p;
}

void writeDebugArtifacts(const Pipeline& p, const RunOptions& options, std::ostream& err) {
  namespace fs = std::filesystem;
  fs::path base = options.outDir.empty() ? fs::path(".") : options.outDir;
  fs::path dir = base / "trigit-debug";
  fs::create_directories(dir);
  for (const StrippedClassText& s : p.frontend.strippedClasses) {
    fs::path file = dir / (s.qualifiedName + ".java");
    std::ofstream out(file, std::ios::binary);
    out << s.text;
    err << "[trigit] debug: wrote " << file.generic_string() << "\n";
  }
}

int cmdRunOrCheck(const RunOptions& options, bool checkOnly, std::ostream& out,
                  std::ostream& err) {
  Style style{colorEnabled(out)};
  Pipeline p = runPipeline(options, err);
  if (p.strictFailed) return kExitSourceErrors;

  if (options.debug)
    err << "[trigit] model: " << p.modelMs << " ms, " << p.build.files.size()
        << " file(s), " << p.build.model.classes.size() << " class(es), "
        << p.build.model.buildConfigs.size() << " build config(s)\n"
        << "[trigit] compile: " << p.frontend.units.size() << " unit(s), "
        << p.frontend.errors.size() << " error(s)\n";

  EvalOptions evalOpts;
  evalOpts.mode = checkOnly ? RunMode::Notify : options.mode;
  evalOpts.assumeTrue = options.assumeTrue;
  evalOpts.noAction = options.noAction || checkOnly;
  evalOpts.debug = options.debug;
  EvalOutput result = evaluateAll(p.build, p.frontend, evalOpts);
  result.report.timings.modelMs = p.modelMs;

  if (options.debug)
    for (const TriggerResult& t : result.report.triggers)
      err << "[trigit] evaluate: " << t.unit << " -> "
          << (t.unevaluable ? "unevaluable" : t.satisfied ? "true" : "false") << "\n";

  if (options.format == ReportFormat::Json) {
    out << reportToJson(result.report);
  } else {
    printTextReport(result.report, out, style);
  }

  if (checkOnly) {
    // Dry description of would-be actions, never any edit.
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < p.frontend.units.size(); ++i) {
      const TrigItUnit& unit = p.frontend.units[i];
      const TriggerResult& r = result.report.triggers[i];
      std::string status = options.assumeTrue
                               ? "would execute"
                               : std::string("trigger currently ") +
                                     (r.satisfied ? "true" : "false");
      if (r.unevaluable) status = "blocked by encoding errors";
      for (const ActionStep& step : unit.actions) {
        std::string line;
        if (step.kind == ActionStep::Kind::Print) {
          line = "would print \"" + step.message + "\"";
        } else {
          std::string target = step.target.methodName   ? *step.target.methodName
                               : step.target.fieldName  ? *step.target.fieldName
                               : step.target.className  ? *step.target.className
                                                        : unit.enclosingClass;
          switch (step.mutation) {
            case MutationKind::SetPublic: line = "would set " + target + " to public"; break;
            case MutationKind::SetProtected:
              line = "would set " + target + " to protected";
              break;
            case MutationKind::SetPrivate: line = "would set " + target + " to private"; break;
            case MutationKind::SetStatic:
              line = "would set " + target + " static to " +
                     (step.flagValue ? "true" : "false");
              break;
            case MutationKind::SetFinal:
              line = "would set " + target + " final to " +
                     (step.flagValue ? "true" : "false");
              break;
            case MutationKind::RemoveMethod: line = "would remove method " + target; break;
            case MutationKind::RemoveField: line = "would remove field " + target; break;
          }
        }
        lines.push_back(line + " (" + status + ")");
      }
      if (unit.kind == UnitKind::Trigger && !unit.guardSites.empty())
        lines.push_back("would fold " + std::to_string(unit.guardSites.size()) +
                        " guard site(s) of " + unit.displayName() + " (" + status + ")");
    }
    if (options.format == ReportFormat::Text) {
      out << "  dry run (" << lines.size() << "):\n";
      for (const std::string& l : lines) out << "    " << l << "\n";
    }
  } else {
    if (options.mode == RunMode::Fold) {
      namespace fs = std::filesystem;
      for (const auto& [path, content] : result.transformed) {
        fs::path target = options.outDir / path;
        fs::create_directories(target.parent_path());
        std::ofstream file(target, std::ios::binary);
        file << content;
      }
      err << "[trigit] wrote " << result.transformed.size() << " file(s) under "
          << options.outDir.generic_string() << "\n";
    } else if (options.mode == RunMode::Patch) {
      std::ofstream file(options.patchPath, std::ios::binary);
      file << result.patch->text;
      err << "[trigit] wrote patch (" << result.patch->filesTouched << " file(s), "
          << result.patch->hunks << " hunk(s)) to " << options.patchPath.generic_string()
          << "\n";
    }
  }

  if (options.debug) writeDebugArtifacts(p, options, err);
  return exitCodeFor(result.report, false);
}

int cmdMine(const std::filesystem::path& root, bool keepAll, std::ostream& out,
            std::ostream& err) {
  std::vector<std::string> warnings;
  std::vector<CommentRecord> all = extractTodos(root, &warnings);
  std::vector<CommentRecord> mined = mineComments(root, keepAll);
  for (const std::string& w : warnings) err << "[trigit] " << w << "\n";
  out << toJsonLines(mined);
  std::size_t tacCount = keepAll ? filterByCueWords(all).size() : mined.size();
  err << "#TODO " << all.size() << " #TAC " << tacCount << "\n";
  return kExitClean;
}

void printMetricsRow(std::ostream& out, const std::string& system, const Metrics& m) {
  out << std::left << std::setw(10) << system << std::right << std::fixed
      << std::setprecision(4) << std::setw(9) << m.accuracy << std::setw(9) << m.f1
      << std::setw(11) << m.precision << std::setw(8) << m.recall << "\n";
}

int cmdClassify(const std::filesystem::path& datasetPath, const std::string& config,
                const std::filesystem::path& embeddingsPath,
                const std::filesystem::path& posTagsPath, const Hyperparams& hp,
                ReportFormat format, std::ostream& out, std::ostream& err) {
  std::vector<LabeledComment> data = loadDataset(datasetPath);

  EmbeddingTable table;
  bool haveEmbeddings = false;
  if (!embeddingsPath.empty()) {
    table = loadEmbeddings(embeddingsPath);
    haveEmbeddings = true;
    for (const std::string& w : table.warnings) err << "[trigit] embeddings: " << w << "\n";
  }
  PosTagger tagger;
  if (!posTagsPath.empty()) {
    std::ifstream in(posTagsPath, std::ios::binary);
    if (!in) throw IoError(posTagsPath.string(), "cannot read POS tag file");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::vector<std::string> warnings;
    tagger = taggerFromOverrides(ss.str(), &warnings);
    for (const std::string& w : warnings) err << "[trigit] pos-tags: " << w << "\n";
  }

  std::vector<std::string> systems;
  if (config == "both") {
    systems = {"baseline", "full"};
  } else {
    systems = {config};
  }
  if (std::find(systems.begin(), systems.end(), "full") != systems.end() &&
      !haveEmbeddings) {
    err << "error: the full configuration requires --embeddings\n";
    return kExitUsage;
  }

  Eigen::VectorXd y = labelVector(data);
  nlohmann::json jsonOut;
  if (format == ReportFormat::Text)
    out << std::left << std::setw(10) << "system" << std::right << std::setw(9)
        << "accuracy" << std::setw(9) << "f1" << std::setw(11) << "precision"
        << std::setw(8) << "recall" << "\n";
  LoocvResult last;
  for (const std::string& system : systems) {
    FeatureConfig cfg =
        system == "full" ? FeatureConfig::Full : FeatureConfig::Baseline;
    Eigen::MatrixXd X =
        featurizeDataset(data, cfg, haveEmbeddings ? &table : nullptr, tagger);
    LoocvResult r = looCrossValidate(X, y, hp);
    last = r;
    if (format == ReportFormat::Text) {
      printMetricsRow(out, system, r.metrics);
    } else {
      jsonOut[system] = {{"accuracy", r.metrics.accuracy}, {"f1", r.metrics.f1},
                         {"precision", r.metrics.precision}, {"recall", r.metrics.recall},
                         {"tp", r.metrics.tp}, {"fp", r.metrics.fp},
                         {"fn", r.metrics.fn}, {"tn", r.metrics.tn}};
    }
  }
  if (format == ReportFormat::Json) out << jsonOut.dump(2) << "\n";
  err << "labels: yes=" << last.yesCount << " no=" << last.noCount << " folds=" << last.folds
      << "\n";
  return kExitClean;
}

int cmdTokens(const RunOptions& options, std::ostream& out, std::ostream& err) {
  Pipeline p = runPipeline(options, err);
  if (p.strictFailed) return kExitSourceErrors;
  std::vector<TokenComplexity> rows = tokenComplexities(p.build, p.frontend);

  if (options.format == ReportFormat::Json) {
    nlohmann::json j;
    j["units"] = nlohmann::json::array();
    double total = 0, trig = 0, act = 0, structure = 0;
    for (const TokenComplexity& r : rows) {
      j["units"].push_back({{"unit", r.unit},
                            {"total", r.totalTokens},
                            {"trigger", r.triggerTokens},
                            {"action", r.actionTokens},
                            {"structure", r.structureTokens}});
      total += r.totalTokens;
      trig += r.triggerTokens;
      act += r.actionTokens;
      structure += r.structureTokens;
    }
    double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
    j["avg"] = {{"total", total / n},
                {"trigger", trig / n},
                {"action", act / n},
                {"structure", structure / n}};
    out << j.dump(2) << "\n";
  } else {
    std::size_t nameWidth = 4;
    for (const TokenComplexity& r : rows) nameWidth = std::max(nameWidth, r.unit.size());
    out << std::left << std::setw(static_cast<int>(nameWidth) + 2) << "unit" << std::right
        << std::setw(7) << "total" << std::setw(9) << "trigger" << std::setw(8)
        << "action" << std::setw(11) << "structure" << "\n";
    double total = 0, trig = 0, act = 0, structure = 0;
    for (const TokenComplexity& r : rows) {
      out << std::left << std::setw(static_cast<int>(nameWidth) + 2) << r.unit
          << std::right << std::setw(7) << r.totalTokens << std::setw(9)
          << r.triggerTokens << std::setw(8) << r.actionTokens << std::setw(11)
          << r.structureTokens << "\n";
      total += r.totalTokens;
      trig += r.triggerTokens;
      act += r.actionTokens;
      structure += r.structureTokens;
    }
    double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
    out << std::left << std::setw(static_cast<int>(nameWidth) + 2) << "Avg." << std::right
        << std::fixed << std::setprecision(1) << std::setw(7) << total / n << std::setw(9)
        << trig / n << std::setw(8) << act / n << std::setw(11) << structure / n << "\n";
  }
  RunReport pseudo;
  pseudo.errors = p.frontend.errors;
  return exitCodeFor(pseudo, false);
}

}  // namespace

int trigitMain(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"executable trigger-action comments for a Java subset"};
  app.require_subcommand(1);

  RunOptions options;
  std::string modeName = "notify";
  std::string formatName = "text";

  auto addCommonFlags = [&](CLI::App* cmd, bool withModes) {
    cmd->add_option("source", options.sourceRoot, "project source root")->required();
    cmd->add_flag("--debug", options.debug, "log phases and write stripped classes");
    cmd->add_flag("--lenient", options.lenient, "tolerate parse/config errors");
    cmd->add_option("--format", formatName, "report format")
        ->check(CLI::IsMember({"text", "json"}));
    if (withModes) {
      cmd->add_flag("--assume-true", options.assumeTrue, "force every trigger to true");
      cmd->add_flag("--no-action", options.noAction, "suppress edit generation");
      cmd->add_option("--mode", modeName, "outcome mode")
          ->check(CLI::IsMember({"notify", "fold", "patch"}));
      cmd->add_option("--out-dir", options.outDir, "output directory for fold mode");
      cmd->add_option("--patch-out", options.patchPath, "patch file for patch mode");
    }
  };

  CLI::App* run = app.add_subcommand("run", "evaluate triggers and take actions");
  addCommonFlags(run, true);
  CLI::App* check = app.add_subcommand("check", "check encodings and describe would-be actions");
  addCommonFlags(check, true);

  CLI::App* mine = app.add_subcommand("mine", "extract and split TODO comments");
  std::filesystem::path mineRoot;
  bool mineAll = false;
  mine->add_option("source", mineRoot, "project source root")->required();
  mine->add_flag("--all", mineAll, "keep records without cue words");

  CLI::App* classify = app.add_subcommand("classify", "train/evaluate the comment classifier");
  std::filesystem::path datasetPath, embeddingsPath, posTagsPath;
  std::string configName = "auto";
  Hyperparams hp;
  classify->add_option("--dataset", datasetPath, "labeled JSONL dataset")->required();
  classify->add_option("--config", configName, "baseline, full or both")
      ->check(CLI::IsMember({"baseline", "full", "both", "auto"}));
  classify->add_option("--embeddings", embeddingsPath, "word2vec-style text embeddings");
  classify->add_option("--pos-tags", posTagsPath, "JSONL per-token POS tag overrides");
  classify->add_option("--learning-rate", hp.learningRate, "gradient-descent step size");
  classify->add_option("--epochs", hp.epochs, "gradient-descent epochs");
  classify->add_option("--l2", hp.l2, "L2 regularization strength");
  classify->add_option("--threshold", hp.threshold, "decision threshold");
  std::string classifyFormat = "text";
  classify->add_option("--format", classifyFormat, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* tokens = app.add_subcommand("tokens", "token-complexity table per unit");
  addCommonFlags(tokens, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitClean;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  options.mode = modeName == "fold"    ? RunMode::Fold
                 : modeName == "patch" ? RunMode::Patch
                                       : RunMode::Notify;
  options.format = formatName == "json" ? ReportFormat::Json : ReportFormat::Text;

  try {
    if (run->parsed() || check->parsed()) {
      if (options.mode == RunMode::Fold && options.outDir.empty()) {
        err << "error: --mode fold requires --out-dir\n";
        return kExitUsage;
      }
      if (options.mode == RunMode::Patch && options.patchPath.empty()) {
        err << "error: --mode patch requires --patch-out\n";
        return kExitUsage;
      }
      if (options.mode == RunMode::Fold) {
        std::error_code ec;
        auto src = std::filesystem::weakly_canonical(options.sourceRoot, ec);
        auto dst = std::filesystem::weakly_canonical(options.outDir, ec);
        if (!ec && src == dst) {
          err << "error: --out-dir must not be the source root (the original "
                 "tree is never modified in place)\n";
          return kExitUsage;
        }
      }
      return cmdRunOrCheck(options, check->parsed(), out, err);
    }
    if (mine->parsed()) return cmdMine(mineRoot, mineAll, out, err);
    if (classify->parsed()) {
      if (configName == "auto") configName = embeddingsPath.empty() ? "baseline" : "both";
      return cmdClassify(datasetPath, configName, embeddingsPath, posTagsPath, hp,
                         classifyFormat == "json" ? ReportFormat::Json : ReportFormat::Text,
                         out, err);
    }
    if (tokens->parsed()) return cmdTokens(options, out, err);
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DegenerateDataset& e) {
    err << "dataset error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitSourceErrors;
  }
  return kExitUsage;
}

}  // namespace trigit
