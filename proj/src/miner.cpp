#include "trigit/miner.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "trigit/lexer.hpp"
#include "trigit/model.hpp"

namespace trigit {

namespace {

std::string collapseWhitespace(const std::string& s) {
  std::string out;
  bool inWs = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      inWs = true;
      continue;
    }
    if (inWs && !out.empty()) out += ' ';
    inWs = false;
    out += c;
  }
  return out;
}

std::string stripCommentSyntax(const std::string& raw) {
  std::string body = raw;
  if (body.rfind("//", 0) == 0) {
    body = body.substr(2);
  } else if (body.rfind("/*", 0) == 0) {
    body = body.substr(2);
    if (body.size() >= 2 && body.substr(body.size() - 2) == "*/")
      body = body.substr(0, body.size() - 2);
    // javadoc-style comments open with /** and prefix lines with '*'
    std::istringstream in(body);
    std::string line, joined;
    while (std::getline(in, line)) {
      std::size_t i = line.find_first_not_of(" \t");
      if (i != std::string::npos && line[i] == '*') line = line.substr(i + 1);
      joined += line;
      joined += ' ';
    }
    body = joined;
  }
  return body;
}

bool wordBoundary(char c) { return !(std::isalnum(static_cast<unsigned char>(c)) || c == '_'); }

// "TODO" as a standalone word; TODOS or myTODO are content, not markers.
bool containsTodoMarker(const std::string& text) {
  std::size_t at = 0;
  while ((at = text.find("TODO", at)) != std::string::npos) {
    bool beforeOk = at == 0 || wordBoundary(text[at - 1]);
    bool afterOk = at + 4 >= text.size() || wordBoundary(text[at + 4]);
    if (beforeOk && afterOk) return true;
    at += 4;
  }
  return false;
}

}  // namespace

std::string normalizeComment(const std::string& rawText) {
  std::string text = collapseWhitespace(stripCommentSyntax(rawText));
  // Strip leading TODO markers (word-delimited) with optional "(author)"
  // metadata and one trailing ':' or '-'.
  while (true) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (text.compare(i, 4, "TODO") != 0) break;
    if (i + 4 < text.size() && !wordBoundary(text[i + 4])) break;
    i += 4;
    while (i < text.size() && text[i] == ' ') ++i;
    if (i < text.size() && text[i] == '(') {
      std::size_t close = text.find(')', i);
      if (close != std::string::npos) {
        i = close + 1;
        while (i < text.size() && text[i] == ' ') ++i;
      }
    }
    if (i < text.size() && (text[i] == ':' || text[i] == '-')) ++i;
    while (i < text.size() && text[i] == ' ') ++i;
    text = text.substr(i);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.pop_back();
  return text;
}

std::vector<std::string> findCueWords(const std::string& text) {
  std::vector<std::string> found;
  std::size_t i = 0;
  while (i < text.size()) {
    if (wordBoundary(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !wordBoundary(text[j])) ++j;
    std::string word = text.substr(i, j - i);
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    for (const std::string& cue : cueWords())
      if (word == cue) found.push_back(cue);
    i = j;
  }
  return found;
}

std::vector<CommentRecord> filterByCueWords(std::vector<CommentRecord> records) {
  std::vector<CommentRecord> kept;
  for (CommentRecord& r : records) {
    r.cueWordsFound = findCueWords(r.normalizedText);
    if (!r.cueWordsFound.empty()) kept.push_back(std::move(r));
  }
  return kept;
}

std::optional<CommentSplit> splitTriggerAction(const std::string& text) {
  struct Template {
    int id;
    std::regex pattern;
    bool triggerFirst;  // capture 1 is the trigger
  };
  static const std::vector<Template> templates = [] {
    auto rx = [](const char* p) {
      return std::regex(p, std::regex::ECMAScript | std::regex::icase);
    };
    std::vector<Template> t;
    t.push_back({1, rx(R"(^if\s+(.+?),\s+then\s+(.+)$)"), true});
    t.push_back({2, rx(R"(^if\s+(.+?),\s+(.+)$)"), true});
    t.push_back({3, rx(R"(^if\s+(.+?)\s+then\s+(.+)$)"), true});
    t.push_back({4, rx(R"(^(.+?)\s+if\s+(.+)$)"), false});
    t.push_back({5, rx(R"(^when\s+(.+?),\s+(.+)$)"), true});
    t.push_back({6, rx(R"(^(.+?)\s+when\s+(.+)$)"), false});
    t.push_back({7, rx(R"(^once\s+(.+?),\s+(.+)$)"), true});
    t.push_back({8, rx(R"(^(.+?)\s+once\s+(.+)$)"), false});
    t.push_back({9, rx(R"(^(.+?)\s+as\s+soon\s+as\s+(.+)$)"), false});
    t.push_back({10, rx(R"(^(.+?),\s+then\s+(.+)$)"), true});
    return t;
  }();

  for (const Template& t : templates) {
    std::smatch m;
    if (!std::regex_match(text, m, t.pattern)) continue;
    CommentSplit split;
    split.templateId = t.id;
    split.triggerText = t.triggerFirst ? m[1].str() : m[2].str();
    split.actionText = t.triggerFirst ? m[2].str() : m[1].str();
    if (split.triggerText.empty() || split.actionText.empty()) continue;
    return split;
  }
  return std::nullopt;
}

std::vector<CommentRecord> extractTodos(const std::filesystem::path& sourceRoot,
                                        std::vector<std::string>* warnings) {
  namespace fs = std::filesystem;
  if (!fs::exists(sourceRoot) || !fs::is_directory(sourceRoot))
    throw IoError(sourceRoot.string(), "source root is not a directory");

  std::vector<fs::path> javaPaths;
  for (const auto& entry : fs::recursive_directory_iterator(sourceRoot))
    if (entry.is_regular_file() && entry.path().extension() == ".java")
      javaPaths.push_back(entry.path());
  std::sort(javaPaths.begin(), javaPaths.end(), [&](const fs::path& a, const fs::path& b) {
    return fs::relative(a, sourceRoot).generic_string() <
           fs::relative(b, sourceRoot).generic_string();
  });

  std::vector<CommentRecord> records;
  for (const fs::path& p : javaPaths) {
    std::string rel = fs::relative(p, sourceRoot).generic_string();
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError(p.string(), "cannot read file");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string content = ss.str();
    std::vector<Token> tokens;
    try {
      tokens = tokenize(content, rel);
    } catch (const LexError& e) {
      if (warnings)
        warnings->push_back(rel + ":" + std::to_string(e.line) + ": skipped (" +
                            e.message + ")");
      continue;
    }
    for (const Token& tok : tokens) {
      for (const TriviaRun& run : tok.leading) {
        if (run.kind == TriviaKind::Whitespace) continue;
        if (!containsTodoMarker(run.text)) continue;
        CommentRecord r;
        r.file = rel;
        r.line = run.span.line;
        r.rawText = run.text;
        r.normalizedText = normalizeComment(run.text);
        records.push_back(std::move(r));
      }
    }
  }
  return records;
}

std::vector<CommentRecord> mineComments(const std::filesystem::path& sourceRoot,
                                        bool keepAll,
                                        std::vector<std::string>* warnings) {
  std::vector<CommentRecord> records = extractTodos(sourceRoot, warnings);
  if (keepAll) {
    for (CommentRecord& r : records) {
      r.cueWordsFound = findCueWords(r.normalizedText);
      if (!r.cueWordsFound.empty()) r.split = splitTriggerAction(r.normalizedText);
    }
    return records;
  }
  records = filterByCueWords(std::move(records));
  for (CommentRecord& r : records) r.split = splitTriggerAction(r.normalizedText);
  return records;
}

std::string toJsonLines(const std::vector<CommentRecord>& records) {
  std::string out;
  for (const CommentRecord& r : records) {
    nlohmann::json j;
    j["file"] = r.file;
    j["line"] = r.line;
    j["raw"] = r.rawText;
    j["text"] = r.normalizedText;
    j["cues"] = r.cueWordsFound;
    if (r.split) {
      j["trigger"] = r.split->triggerText;
      j["action"] = r.split->actionText;
      j["template"] = r.split->templateId;
    } else {
      j["trigger"] = nullptr;
      j["action"] = nullptr;
      j["template"] = nullptr;
    }
    out += j.dump();
    out += "\n";
  }
  return out;
}

}  // namespace trigit
