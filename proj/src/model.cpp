#include "trigit/model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "trigit/lexer.hpp"
#include "trigit/parser.hpp"

namespace trigit {

const char* visibilityKeyword(Visibility v) {
  switch (v) {
    case Visibility::Public: return "public";
    case Visibility::Protected: return "protected";
    case Visibility::Private: return "private";
    case Visibility::Package: return "";
  }
  return "";
}

std::optional<JavaVersion> JavaVersion::parse(std::string_view text) {
  std::string_view t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  std::string_view digits = t;
  if (digits.size() > 2 && digits.substr(0, 2) == "1.") digits.remove_prefix(2);
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  int major = 0;
  for (char c : digits) {
    major = major * 10 + (c - '0');
    if (major > 99) return std::nullopt;
  }
  if (major < 5 || major > 13) return std::nullopt;
  return JavaVersion{major, std::string(t)};
}

JavaVersion JavaVersion::constant(int major) {
  // JAVA5..JAVA8 read naturally as "1.N"; 9 dropped the prefix.
  std::string text = major <= 8 ? "1." + std::to_string(major) : std::to_string(major);
  return JavaVersion{major, text};
}

std::strong_ordering compareJavaVersions(const JavaVersion& a, const JavaVersion& b) {
  return a.major <=> b.major;
}

bool greaterEqualThan(const JavaVersion& a, const JavaVersion& b) {
  auto ord = compareJavaVersions(a, b);
  return ord == std::strong_ordering::equal || ord == std::strong_ordering::greater;
}

namespace {

std::string readFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(p.string(), "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int lineOfOffset(const std::string& text, std::size_t off) {
  int line = 1;
  for (std::size_t i = 0; i < off && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::string decodeXmlEntities(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '&') {
      static const std::pair<const char*, char> ents[] = {
          {"&lt;", '<'}, {"&gt;", '>'}, {"&amp;", '&'}, {"&apos;", '\''}, {"&quot;", '"'}};
      bool hit = false;
      for (auto& [ent, ch] : ents) {
        std::size_t n = std::string_view(ent).size();
        if (s.compare(i, n, ent) == 0) {
          out.push_back(ch);
          i += n;
          hit = true;
          break;
        }
      }
      if (hit) continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

// Blanks out <!-- ... --> regions, preserving newlines so line numbers hold.
std::string stripXmlComments(const std::string& s) {
  std::string out = s;
  std::size_t pos = 0;
  while ((pos = out.find("<!--", pos)) != std::string::npos) {
    std::size_t end = out.find("-->", pos);
    std::size_t stop = end == std::string::npos ? out.size() : end + 3;
    for (std::size_t i = pos; i < stop; ++i)
      if (out[i] != '\n') out[i] = ' ';
    pos = stop;
  }
  return out;
}

struct ElementHit {
  std::string value;
  std::size_t offset;
};

std::optional<ElementHit> findElement(const std::string& xml, const std::string& tag) {
  std::string open = "<" + tag + ">";
  std::string close = "</" + tag + ">";
  std::size_t at = xml.find(open);
  if (at == std::string::npos) return std::nullopt;
  std::size_t valueStart = at + open.size();
  std::size_t end = xml.find(close, valueStart);
  if (end == std::string::npos) return std::nullopt;
  return ElementHit{xml.substr(valueStart, end - valueStart), at};
}

}  // namespace

BuildConfigModel parsePomConfig(const std::string& content, const std::string& displayPath) {
  std::string xml = stripXmlComments(content);
  // Key priority: maven.compiler.source > source > java.version; first
  // occurrence of the winning key in document order.
  for (const char* tag : {"maven.compiler.source", "source", "java.version"}) {
    if (auto hit = findElement(xml, tag)) {
      std::string raw = decodeXmlEntities(hit->value);
      auto version = JavaVersion::parse(raw);
      if (!version)
        throw ConfigError(displayPath, "version string '" + raw + "' does not normalize");
      return BuildConfigModel{displayPath, *version, lineOfOffset(xml, hit->offset)};
    }
  }
  throw ConfigError(displayPath, "no Java version element found");
}

BuildConfigModel parsePropertiesConfig(const std::string& content,
                                       const std::string& displayPath) {
  std::istringstream in(content);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) continue;
    std::string key = trimmed.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key != "java.version") continue;
    std::string value = trimmed.substr(eq + 1);
    auto version = JavaVersion::parse(value);
    if (!version)
      throw ConfigError(displayPath, "version string '" + value + "' does not normalize");
    return BuildConfigModel{displayPath, *version, lineNo};
  }
  throw ConfigError(displayPath, "no java.version key found");
}

BuildConfigModel parseBuildConfig(const std::filesystem::path& path) {
  std::string content = readFile(path);
  std::string name = path.filename().string();
  if (name == "pom.xml") return parsePomConfig(content, path.string());
  if (name == "trigit.properties") return parsePropertiesConfig(content, path.string());
  throw ConfigError(path.string(), "unsupported build config file name");
}

namespace {

Modifiers modifiersFrom(const CompilationUnit& unit, const AstNode& decl) {
  Modifiers mods;
  const AstNode* list = modifierListOf(decl);
  if (!list) return mods;
  mods.span = list->span;
  for (const Token& t : unit.tokens) {
    if (t.span.begin < list->span.begin) continue;
    if (t.span.begin >= list->span.end) break;
    if (t.text == "public") {
      mods.visibility = Visibility::Public;
      mods.visibilitySpan = t.span;
    } else if (t.text == "protected") {
      mods.visibility = Visibility::Protected;
      mods.visibilitySpan = t.span;
    } else if (t.text == "private") {
      mods.visibility = Visibility::Private;
      mods.visibilitySpan = t.span;
    } else if (t.text == "static") {
      mods.isStatic = true;
      mods.staticSpan = t.span;
    } else if (t.text == "final") {
      mods.isFinal = true;
      mods.finalSpan = t.span;
    } else if (t.text == "abstract") {
      mods.isAbstract = true;
    }
  }
  return mods;
}

std::vector<std::string> annotationNames(const AstNode& decl) {
  std::vector<std::string> out;
  for (const AstNode* a : annotationsOf(decl)) out.push_back(a->text);
  return out;
}

void collectClasses(const ParsedFile& file, const AstNode& classDecl,
                    const std::string& prefix, std::vector<ClassModel>& out) {
  ClassModel cls;
  cls.name = declNameOf(classDecl)->text;
  cls.qualifiedName = prefix.empty() ? cls.name : prefix + "." + cls.name;
  cls.modifiers = modifiersFrom(file.unit, classDecl);
  cls.file = file.path;
  cls.declSpan = classDecl.span;
  for (const AstNode* member : membersOf(classDecl)) {
    if (member->kind == NodeKind::FieldDecl) {
      FieldModel f;
      f.name = declNameOf(*member)->text;
      f.modifiers = modifiersFrom(file.unit, *member);
      f.typeText = declTypeOf(*member)->text;
      f.annotations = annotationNames(*member);
      f.file = file.path;
      f.declSpan = member->span;
      cls.fields.push_back(std::move(f));
    } else if (member->kind == NodeKind::MethodDecl) {
      MethodModel m;
      m.name = declNameOf(*member)->text;
      m.modifiers = modifiersFrom(file.unit, *member);
      m.typeText = declTypeOf(*member)->text;
      m.annotations = annotationNames(*member);
      m.file = file.path;
      m.declSpan = member->span;
      m.paramCount = static_cast<int>(paramsOf(*member).size());
      m.isTrigItMethod =
          std::find(m.annotations.begin(), m.annotations.end(), "TrigItMethod") !=
          m.annotations.end();
      cls.methods.push_back(std::move(m));
    }
  }
  std::string ownPrefix = cls.qualifiedName;
  out.push_back(std::move(cls));
  for (const AstNode* member : membersOf(classDecl))
    if (member->kind == NodeKind::ClassDecl)
      collectClasses(file, *member, ownPrefix, out);
}

}  // namespace

std::vector<ClassModel> classModelsOf(const ParsedFile& file) {
  std::vector<ClassModel> out;
  for (const AstNodePtr& top : file.unit.root->children)
    if (top->kind == NodeKind::ClassDecl)
      collectClasses(file, *top, file.unit.packageName, out);
  return out;
}

ProjectBuild buildProjectModel(const std::filesystem::path& sourceRoot) {
  namespace fs = std::filesystem;
  if (!fs::exists(sourceRoot) || !fs::is_directory(sourceRoot))
    throw IoError(sourceRoot.string(), "source root is not a directory");

  std::vector<fs::path> javaPaths;
  std::vector<fs::path> configPaths;
  for (const auto& entry : fs::recursive_directory_iterator(sourceRoot)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    std::string name = p.filename().string();
    if (p.extension() == ".java") javaPaths.push_back(p);
    else if (name == "pom.xml" || name == "trigit.properties") configPaths.push_back(p);
  }
  auto relKey = [&](const fs::path& p) {
    return fs::relative(p, sourceRoot).generic_string();
  };
  std::sort(javaPaths.begin(), javaPaths.end(),
            [&](const fs::path& a, const fs::path& b) { return relKey(a) < relKey(b); });
  std::sort(configPaths.begin(), configPaths.end(),
            [&](const fs::path& a, const fs::path& b) { return relKey(a) < relKey(b); });

  ProjectBuild build;
  for (const fs::path& p : javaPaths) {
    std::string rel = relKey(p);
    std::string content = readFile(p);
    try {
      CompilationUnit unit = parseSource(content, rel);
      build.files.push_back(ParsedFile{rel, std::move(unit)});
    } catch (const LexError& e) {
      build.parseErrors.push_back({e.file, e.line, e.column, e.message});
      build.unparsedTexts.emplace_back(rel, content);
    } catch (const ParseError& e) {
      build.parseErrors.push_back(
          {e.file, e.line, e.column, "expected " + e.expected + ", found " + e.found});
      build.unparsedTexts.emplace_back(rel, content);
    }
  }

  for (const ParsedFile& file : build.files) {
    JavaFileModel jf;
    jf.path = file.path;
    std::vector<ClassModel> classes = classModelsOf(file);
    for (ClassModel& cls : classes) {
      bool duplicate = false;
      for (const ClassModel& existing : build.model.classes) {
        if (existing.qualifiedName == cls.qualifiedName) {
          build.warnings.push_back("duplicate class " + cls.qualifiedName + " in " +
                                   cls.file + " ignored (first seen in " + existing.file +
                                   ")");
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      jf.classQualifiedNames.push_back(cls.qualifiedName);
      build.model.classes.push_back(std::move(cls));
    }
    build.model.javaFiles.push_back(std::move(jf));
  }

  for (const fs::path& p : configPaths) {
    std::string rel = relKey(p);
    try {
      std::string content = readFile(p);
      BuildConfigModel cfg = p.filename() == "pom.xml"
                                 ? parsePomConfig(content, rel)
                                 : parsePropertiesConfig(content, rel);
      build.configTexts.emplace_back(rel, std::move(content));
      build.model.buildConfigs.push_back(std::move(cfg));
    } catch (const ConfigError& e) {
      build.configErrors.push_back({e.path, 0, 0, e.reason});
    }
  }
  return build;
}

ClassLookup lookupClass(const ProjectModel& model, const std::string& name) {
  ClassLookup result;
  for (const ClassModel& cls : model.classes) {
    if (cls.qualifiedName == name) return {&cls, false};
  }
  for (const ClassModel& cls : model.classes) {
    std::size_t dot = cls.qualifiedName.find_last_of('.');
    std::string simple =
        dot == std::string::npos ? cls.qualifiedName : cls.qualifiedName.substr(dot + 1);
    if (simple == name) {
      if (!result.cls) result.cls = &cls;
      else result.ambiguous = true;
    }
  }
  return result;
}

std::vector<const MethodModel*> methodsNamed(const ClassModel& cls, const std::string& name) {
  std::vector<const MethodModel*> out;
  for (const MethodModel& m : cls.methods)
    if (m.name == name) out.push_back(&m);
  return out;
}

std::vector<const FieldModel*> fieldsNamed(const ClassModel& cls, const std::string& name) {
  std::vector<const FieldModel*> out;
  for (const FieldModel& f : cls.fields)
    if (f.name == name) out.push_back(&f);
  return out;
}

}  // namespace trigit
