#pragma once

#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trigit/ast.hpp"

namespace trigit {

enum class Visibility { Public, Protected, Private, Package };

const char* visibilityKeyword(Visibility v);  // "" for Package

struct Modifiers {
  Visibility visibility = Visibility::Package;
  bool isStatic = false;
  bool isFinal = false;
  bool isAbstract = false;
  Span span;  // whole modifier region; zero-width when the list is empty
  std::optional<Span> visibilitySpan;
  std::optional<Span> staticSpan;
  std::optional<Span> finalSpan;
};

// Normalized Java language version: "1.N" and "N" collapse to major N.
struct JavaVersion {
  int major = 0;
  std::string sourceText;

  static std::optional<JavaVersion> parse(std::string_view text);
  static JavaVersion constant(int major);  // JAVA5..JAVA9
};

std::strong_ordering compareJavaVersions(const JavaVersion& a, const JavaVersion& b);
bool greaterEqualThan(const JavaVersion& a, const JavaVersion& b);

struct FieldModel {
  std::string name;
  Modifiers modifiers;
  std::string typeText;
  std::vector<std::string> annotations;
  std::string file;
  Span declSpan;
};

struct MethodModel {
  std::string name;
  Modifiers modifiers;
  std::string typeText;  // return type as written
  std::vector<std::string> annotations;
  std::string file;
  Span declSpan;
  int paramCount = 0;
  bool isTrigItMethod = false;
};

struct ClassModel {
  std::string name;           // simple name
  std::string qualifiedName;  // package.Outer.Inner
  Modifiers modifiers;
  std::vector<FieldModel> fields;    // source order
  std::vector<MethodModel> methods;  // source order
  std::string file;
  Span declSpan;
};

struct BuildConfigModel {
  std::string path;
  JavaVersion javaVersion;
  int versionLine = 0;  // line the version string was read from
};

struct JavaFileModel {
  std::string path;
  std::vector<std::string> classQualifiedNames;
};

struct ProjectModel {
  std::vector<JavaFileModel> javaFiles;
  std::vector<ClassModel> classes;  // flattened, nested included; unique FQNs
  std::vector<BuildConfigModel> buildConfigs;
};

struct IoError : std::runtime_error {
  std::string path;
  IoError(std::string path_, const std::string& reason)
      : std::runtime_error(path_ + ": " + reason), path(std::move(path_)) {}
};

struct ConfigError : std::runtime_error {
  std::string path;
  std::string reason;
  ConfigError(std::string path_, std::string reason_)
      : std::runtime_error(path_ + ": " + reason_),
        path(std::move(path_)), reason(std::move(reason_)) {}
};

struct SourceError {
  std::string file;
  int line = 0;
  int column = 0;
  std::string message;
};

struct ParsedFile {
  std::string path;  // relative to the source root, '/'-separated
  CompilationUnit unit;
};

struct ProjectBuild {
  ProjectModel model;
  std::vector<ParsedFile> files;  // deterministic path order
  std::vector<std::pair<std::string, std::string>> configTexts;  // path, raw bytes
  std::vector<std::pair<std::string, std::string>> unparsedTexts;  // lenient passthrough
  std::vector<SourceError> parseErrors;
  std::vector<SourceError> configErrors;
  std::vector<std::string> warnings;
};

// Walks sourceRoot for .java files plus pom.xml / trigit.properties configs
// and assembles the model. Per-file parse and config errors are collected,
// never thrown; callers running in strict mode abort when the lists are
// non-empty. Throws IoError when the root is missing or a file is unreadable.
ProjectBuild buildProjectModel(const std::filesystem::path& sourceRoot);

BuildConfigModel parseBuildConfig(const std::filesystem::path& path);
// Content-based variants; displayPath is used in the model and in errors.
BuildConfigModel parsePomConfig(const std::string& content, const std::string& displayPath);
BuildConfigModel parsePropertiesConfig(const std::string& content,
                                       const std::string& displayPath);

// Builds the flattened class models for one parsed file (exposed for the
// model-construction tests; buildProjectModel uses it per file).
std::vector<ClassModel> classModelsOf(const ParsedFile& file);

struct ClassLookup {
  const ClassModel* cls = nullptr;
  bool ambiguous = false;
};

// Finds a class by qualified name, else by simple name (last segment). When a
// simple name matches several classes the first in path order wins and
// `ambiguous` is set.
ClassLookup lookupClass(const ProjectModel& model, const std::string& name);

std::vector<const MethodModel*> methodsNamed(const ClassModel& cls, const std::string& name);
std::vector<const FieldModel*> fieldsNamed(const ClassModel& cls, const std::string& name);

}  // namespace trigit
