#include <doctest.h>

#include <json.hpp>

#include "support/test_util.hpp"
#include "trigit/miner.hpp"

using namespace trigit;
using testutil::TempDir;

TEST_CASE("extractTodos: fig2 comment appears once at its line") {
  auto records = extractTodos(testutil::fixtureDir() / "fig2");
  REQUIRE(records.size() == 1);
  CHECK(records[0].file == "FreemarkerResultMockedTest.java");
  CHECK(records[0].line == 6);
  CHECK(records[0].normalizedText ==
        "remove expectedJDK15 and if() after switching to Java 1.6");
}

TEST_CASE("extractTodos: FIXME-only files yield no records") {
  TempDir dir("fixme");
  testutil::writeFile(dir.path() / "A.java", "// FIXME: x\nclass A {}\n");
  CHECK(extractTodos(dir.path()).empty());
}

TEST_CASE("extractTodos: TODO must stand alone as a word") {
  TempDir dir("todoword");
  testutil::writeFile(dir.path() / "A.java",
                      "// TODOS are tracked elsewhere\n"
                      "// myTODO: not a marker\n"
                      "// TODO: the real one\n"
                      "class A {}\n");
  auto records = extractTodos(dir.path());
  REQUIRE(records.size() == 1);
  CHECK(records[0].normalizedText == "the real one");
}

TEST_CASE("extractTodos: lowercase todo does not match (case-sensitive marker)") {
  TempDir dir("lowertodo");
  testutil::writeFile(dir.path() / "A.java", "// todo: x\nclass A {}\n");
  CHECK(extractTodos(dir.path()).empty());
}

TEST_CASE("multi-line block comments collapse to one single-spaced record") {
  TempDir dir("block");
  testutil::writeFile(dir.path() / "A.java",
                      "/** TODO x\n * y */\nclass A {}\n");
  auto records = extractTodos(dir.path());
  REQUIRE(records.size() == 1);
  CHECK(records[0].normalizedText == "x y");
  CHECK(records[0].line == 1);
}

TEST_CASE("unlexable files are skipped with a warning, others still mined") {
  TempDir dir("lenient");
  testutil::writeFile(dir.path() / "Bad.java", "class Bad { String s = \"unterminated; }\n");
  testutil::writeFile(dir.path() / "Good.java", "// TODO: remove once done\nclass Good {}\n");
  std::vector<std::string> warnings;
  auto records = extractTodos(dir.path(), &warnings);
  REQUIRE(records.size() == 1);
  CHECK(records[0].file == "Good.java");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("Bad.java") != std::string::npos);
}

TEST_CASE("normalize strips marker, attribution and separator punctuation") {
  CHECK(normalizeComment("// TODO (pynie): fix this") == "fix this");
  CHECK(normalizeComment("/* TODO */") == "");
  CHECK(normalizeComment("// TODO- remove once merged") == "remove once merged");
  CHECK(normalizeComment("// TODO TODO: doubled") == "doubled");
  CHECK(normalizeComment("// TODOX is not a marker") == "TODOX is not a marker");
}

TEST_CASE("normalize is idempotent") {
  for (const char* raw :
       {"// TODO (a): x", "/** TODO y */", "// TODO- z", "// plain comment TODO inside"}) {
    std::string once = normalizeComment(raw);
    CHECK(normalizeComment("// TODO: " + once) == once);
    CHECK(normalizeComment("// " + once) == once);
  }
}

TEST_CASE("cue filter keeps 'once', drops cue-free and identifier-embedded text") {
  CommentRecord keep;
  keep.normalizedText = "Remove this guard once lazyStackTrace() works in Java 9.";
  CommentRecord dropPlain;
  dropPlain.normalizedText = "refactor later";
  CommentRecord dropEmbedded;
  dropEmbedded.normalizedText = "increase ONCE_LIMIT";
  auto kept = filterByCueWords({keep, dropPlain, dropEmbedded});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].cueWordsFound == std::vector<std::string>{"once"});
}

TEST_CASE("cue filter equals a brute-force whole-word scan (independent oracle)") {
  auto records = extractTodos(testutil::fixtureDir() / "miner");
  auto kept = filterByCueWords(records);

  // Brute force: lowercase the text, split strictly on non-word characters,
  // compare each token against the five cue words.
  std::size_t oracleCount = 0;
  for (const CommentRecord& r : records) {
    std::string lower;
    for (char c : r.normalizedText)
      lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : lower) {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        cur += c;
      } else if (!cur.empty()) {
        tokens.push_back(cur);
        cur.clear();
      }
    }
    if (!cur.empty()) tokens.push_back(cur);
    bool hasCue = false;
    for (const std::string& t : tokens)
      if (t == "if" || t == "when" || t == "once" || t == "as" || t == "then")
        hasCue = true;
    if (hasCue) ++oracleCount;
  }
  CHECK(kept.size() == oracleCount);
}

TEST_CASE("all 18 Table-2-style comments pass the cue filter") {
  auto records = extractTodos(testutil::fixtureDir() / "miner");
  REQUIRE(records.size() == 18);
  auto kept = filterByCueWords(records);
  CHECK(kept.size() == 18);
}

TEST_CASE("the once-template splits the ThrowablesTest comment as documented") {
  auto split =
      splitTriggerAction("Remove this guard once lazyStackTrace() works in Java 9.");
  REQUIRE(split.has_value());
  CHECK(split->actionText == "Remove this guard");
  CHECK(split->triggerText == "lazyStackTrace() works in Java 9.");
  CHECK(split->templateId == 8);
}

TEST_CASE("if/then and bare-if templates split in priority order") {
  auto s1 = splitTriggerAction("if X, then Y");
  REQUIRE(s1.has_value());
  CHECK(s1->templateId == 1);
  CHECK(s1->triggerText == "X");
  CHECK(s1->actionText == "Y");

  auto s2 = splitTriggerAction("if X, do Y");
  REQUIRE(s2.has_value());
  CHECK(s2->templateId == 2);

  auto s3 = splitTriggerAction("if X then Y");
  REQUIRE(s3.has_value());
  CHECK(s3->templateId == 3);

  auto s4 = splitTriggerAction("do Y if X holds");
  REQUIRE(s4.has_value());
  CHECK(s4->templateId == 4);
  CHECK(s4->actionText == "do Y");
  CHECK(s4->triggerText == "X holds");
}

TEST_CASE("cue present but no template fit stays unsplit") {
  CHECK_FALSE(splitTriggerAction("as discussed above").has_value());
}

TEST_CASE("per-template reconstruction: segments rejoined with the connective "
          "rebuild the input") {
  struct Case {
    const char* text;
  };
  const char* cases[] = {
      "if X is gone, then drop Y",
      "if the flag flips, drop the shim",
      "if support lands then delete this",
      "delete this if support lands",
      "when the glitch is fixed, enable the test",
      "enable the test when the glitch is fixed",
      "once the merge happens, make this protected",
      "make this protected once the merge happens",
      "switch to the new API as soon as the backport ships",
      "the deadline passes, then remove the alias",
  };
  auto lower = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  for (const char* text : cases) {
    CAPTURE(text);
    auto split = splitTriggerAction(text);
    REQUIRE(split.has_value());
    std::string rebuilt;
    const std::string& t = split->triggerText;
    const std::string& a = split->actionText;
    switch (split->templateId) {
      case 1: rebuilt = "if " + t + ", then " + a; break;
      case 2: rebuilt = "if " + t + ", " + a; break;
      case 3: rebuilt = "if " + t + " then " + a; break;
      case 4: rebuilt = a + " if " + t; break;
      case 5: rebuilt = "when " + t + ", " + a; break;
      case 6: rebuilt = a + " when " + t; break;
      case 7: rebuilt = "once " + t + ", " + a; break;
      case 8: rebuilt = a + " once " + t; break;
      case 9: rebuilt = a + " as soon as " + t; break;
      case 10: rebuilt = t + ", then " + a; break;
    }
    CHECK(lower(rebuilt) == lower(text));
  }
}

TEST_CASE("mineComments emits well-formed JSON Lines") {
  auto records = mineComments(testutil::fixtureDir() / "miner", false);
  std::string jsonl = toJsonLines(records);
  std::istringstream in(jsonl);
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.contains("file"));
    CHECK(j.contains("line"));
    CHECK(j.contains("raw"));
    CHECK(j.contains("text"));
    CHECK(j.contains("cues"));
    CHECK(j.contains("trigger"));
    CHECK(j.contains("action"));
    CHECK(j.contains("template"));
    if (!j["template"].is_null()) {
      CHECK(j["template"].get<int>() >= 1);
      CHECK(j["template"].get<int>() <= 10);
      CHECK(j["trigger"].is_string());
      CHECK(j["action"].is_string());
    }
    ++count;
  }
  CHECK(count == records.size());
}

TEST_CASE("records come out ordered by file then line") {
  auto records = extractTodos(testutil::fixtureDir() / "miner");
  for (std::size_t i = 1; i < records.size(); ++i) {
    bool ordered = records[i - 1].file < records[i].file ||
                   (records[i - 1].file == records[i].file &&
                    records[i - 1].line <= records[i].line);
    CHECK(ordered);
  }
}
