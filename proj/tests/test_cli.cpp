#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "support/schema_check.hpp"
#include "support/test_util.hpp"
#include "trigit/cli.hpp"

using namespace trigit;
using testutil::TempDir;

namespace {

struct CliRun {
  int exitCode = 0;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = trigitMain(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) {
  return (testutil::fixtureDir() / name).string();
}

}  // namespace

TEST_CASE("exit 0: clean corpus without TrigIt methods") {
  TempDir dir("cli_clean");
  testutil::writeFile(dir.path() / "A.java", "class A { void m() {} }\n");
  CliRun r = cli({"run", dir.path().string()});
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("triggers (0)") != std::string::npos);
}

TEST_CASE("exit 1: fig2 fires trigItJava6 with the version explanation") {
  CliRun r = cli({"run", fixture("fig2")});
  CHECK(r.exitCode == 1);
  CHECK(r.out.find("trigItJava6") != std::string::npos);
  CHECK(r.out.find("Java version 1.7 >= 1.6; file: trigit.properties, line: 1") !=
        std::string::npos);
}

TEST_CASE("exit 2: missing referent wins over a satisfied trigger") {
  TempDir dir("cli_prec21");
  testutil::copyFixture("encerr", dir.path());
  testutil::writeFile(dir.path() / "Fires.java",
                      "class Fires {\n"
                      "  @TrigItMethod boolean t() { return TrigIt.hasClass(\"C\"); }\n"
                      "}\n");
  CliRun r = cli({"run", dir.path().string()});
  CHECK(r.exitCode == 2);
  CHECK(r.out.find("MISSING_REFERENT") != std::string::npos);
  CHECK(r.out.find("[SATISFIED]") != std::string::npos);  // both conditions held
}

TEST_CASE("exit 3: strict parse errors beat encoding errors and satisfied triggers") {
  TempDir dir("cli_prec3");
  testutil::copyFixture("encerr", dir.path());
  testutil::writeFile(dir.path() / "Broken.java", "class Broken { void m() { for(;;) } }\n");
  CliRun r = cli({"run", dir.path().string()});
  CHECK(r.exitCode == 3);
  CHECK(r.err.find("Broken.java") != std::string::npos);

  // lenient mode tolerates the broken file and falls back to the next code
  CliRun lenient = cli({"run", dir.path().string(), "--lenient"});
  CHECK(lenient.exitCode == 2);
  CHECK(lenient.out.find("lenient: skipped Broken.java") != std::string::npos);
}

TEST_CASE("exit 4: usage and io errors") {
  CHECK(cli({"run", "/nonexistent/path"}).exitCode == 4);
  CHECK(cli({"frobnicate"}).exitCode == 4);
  CHECK(cli({"run"}).exitCode == 4);  // missing source root
  CHECK(cli({"run", ".", "--mode", "fold"}).exitCode == 4);   // fold without out-dir
  CHECK(cli({"run", ".", "--mode", "patch"}).exitCode == 4);  // patch without patch-out
  CHECK(cli({"classify"}).exitCode == 4);                     // missing dataset
}

TEST_CASE("json and text reports agree on names, satisfaction and error counts") {
  TempDir dir("cli_agree");
  testutil::copyFixture("fig2", dir.path());
  testutil::copyFixture("encerr", dir.path());
  CliRun text = cli({"run", dir.path().string()});
  CliRun json = cli({"run", dir.path().string(), "--format", "json"});
  CHECK(text.exitCode == json.exitCode);

  nlohmann::json j = nlohmann::json::parse(json.out);
  for (const auto& t : j["triggers"]) {
    std::string unit = t["unit"].get<std::string>();
    CHECK(text.out.find(unit) != std::string::npos);
    bool satisfied = t["satisfied"].get<bool>();
    std::size_t at = text.out.find(unit);
    std::size_t lineStart = text.out.rfind('\n', at) + 1;
    std::size_t lineEnd = text.out.find('\n', at);
    std::string line = text.out.substr(lineStart, lineEnd - lineStart);
    CHECK((line.find("[SATISFIED]") != std::string::npos) == satisfied);
  }
  CHECK(text.out.find("encoding errors (" + std::to_string(j["errors"].size()) + ")") !=
        std::string::npos);
}

TEST_CASE("json reports validate against the shipped schema for every fixture") {
  nlohmann::json schema = nlohmann::json::parse(
      testutil::readFile(std::filesystem::path(TRIGIT_SCHEMA_DIR) / "report.schema.json"));
  for (const char* name : {"fig1", "fig2", "fig3", "encerr"}) {
    CAPTURE(name);
    CliRun r = cli({"run", fixture(name), "--format", "json"});
    nlohmann::json report = nlohmann::json::parse(r.out);
    auto violations = testutil::validateAgainstSchema(schema, report);
    CHECK(violations.empty());
    if (!violations.empty())
      for (const auto& v : violations) MESSAGE(v);
  }
}

TEST_CASE("check: dry-run line for fig3 and exit 0") {
  CliRun r = cli({"check", fixture("fig3")});
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("would set simpleName to protected (trigger currently false)") !=
        std::string::npos);
  CHECK(r.out.find("edits (0)") != std::string::npos);
}

TEST_CASE("check: assume-true marks actions as would execute") {
  CliRun r = cli({"check", fixture("fig3"), "--assume-true"});
  CHECK(r.exitCode == 1);  // forced satisfaction still signals
  CHECK(r.out.find("would set simpleName to protected (would execute)") !=
        std::string::npos);
}

TEST_CASE("check: missing referent yields exit 2") {
  CHECK(cli({"check", fixture("encerr")}).exitCode == 2);
}

TEST_CASE("run --mode patch writes the golden fig3 patch") {
  TempDir src("cli_patch_src");
  testutil::copyFixture("fig3", src.path(), "FieldMapper.java");
  TempDir outDir("cli_patch_out");
  auto patchPath = outDir.path() / "fix.patch";
  CliRun r = cli({"run", src.path().string(), "--mode", "patch", "--patch-out",
                  patchPath.string()});
  CHECK(r.exitCode == 1);
  CHECK(testutil::readFile(patchPath) ==
        testutil::readFile(testutil::fixtureDir() / "golden/fig3.patch"));
}

TEST_CASE("run --mode fold mirrors the tree with transformed sources") {
  TempDir src("cli_fold_src");
  testutil::copyFixture("fig2", src.path());
  TempDir outDir("cli_fold_out");
  CliRun r = cli({"run", src.path().string(), "--mode", "fold", "--out-dir",
                  outDir.path().string()});
  CHECK(r.exitCode == 1);
  std::string folded =
      testutil::readFile(outDir.path() / "FreemarkerResultMockedTest.java");
  CHECK(folded.find("if (trigItJava6())") == std::string::npos);
  CHECK(folded.find("trigItJava6") == std::string::npos);  // unit removed too
  CHECK(folded.find("assertEquals(expectedJDK16, result);") != std::string::npos);
  // untouched files are mirrored byte-for-byte
  CHECK(testutil::readFile(outDir.path() / "trigit.properties") == "java.version=1.7\n");
}

TEST_CASE("debug mode writes stripped classes under trigit-debug") {
  TempDir src("cli_debug_src");
  testutil::copyFixture("fig3", src.path());
  TempDir outDir("cli_debug_out");
  CliRun r = cli({"run", src.path().string(), "--debug", "--mode", "fold", "--out-dir",
                  outDir.path().string()});
  CHECK(r.exitCode == 0);  // both classes present: trigger false
  std::string stripped = testutil::readFile(
      outDir.path() / "trigit-debug" / "org.elasticsearch.index.mapper.Mapper.java");
  CHECK(stripped.find("checkMerge") != std::string::npos);
  CHECK(stripped.find("simpleName()") == std::string::npos);  // plain method stripped
  CHECK(stripped.find("getMethod(\"simpleName\")") != std::string::npos);  // substituted
  CHECK(r.err.find("[trigit] model:") != std::string::npos);
  CHECK(r.err.find("[trigit] evaluate:") != std::string::npos);
}

TEST_CASE("fold refuses an out-dir equal to the source root") {
  TempDir src("cli_fold_inplace");
  testutil::copyFixture("fig2", src.path());
  CliRun r = cli({"run", src.path().string(), "--mode", "fold", "--out-dir",
                  src.path().string()});
  CHECK(r.exitCode == 4);
  CHECK(r.err.find("in place") != std::string::npos);
}

TEST_CASE("lenient fold mirrors unparseable files verbatim") {
  TempDir src("cli_fold_lenient");
  testutil::copyFixture("fig2", src.path());
  testutil::writeFile(src.path() / "Broken.java", "class Broken { switch } \n");
  TempDir outDir("cli_fold_lenient_out");
  CliRun r = cli({"run", src.path().string(), "--lenient", "--mode", "fold",
                  "--out-dir", outDir.path().string()});
  CHECK(r.exitCode == 1);
  CHECK(testutil::readFile(outDir.path() / "Broken.java") ==
        testutil::readFile(src.path() / "Broken.java"));
}

TEST_CASE("TRIGIT_NO_COLOR output carries no ANSI escapes") {
  // Test streams are not a terminal, so output must be plain either way.
  CliRun r = cli({"run", fixture("fig2")});
  CHECK(r.out.find("\033[") == std::string::npos);
}

TEST_CASE("mine: corpus summary counts and JSONL payload") {
  CliRun r = cli({"mine", fixture("miner")});
  CHECK(r.exitCode == 0);
  CHECK(r.err.find("#TODO 18 #TAC 18") != std::string::npos);
  std::istringstream in(r.out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.contains("cues"));
    ++lines;
  }
  CHECK(lines == 18);
}

TEST_CASE("mine: empty corpus reports #TODO 0") {
  TempDir dir("cli_mine_empty");
  testutil::writeFile(dir.path() / "A.java", "class A {}\n");
  CliRun r = cli({"mine", dir.path().string()});
  CHECK(r.exitCode == 0);
  CHECK(r.out.empty());
  CHECK(r.err.find("#TODO 0 #TAC 0") != std::string::npos);
}

TEST_CASE("mine: #TAC never exceeds #TODO, --all keeps everything") {
  TempDir dir("cli_mine_mixed");
  testutil::writeFile(dir.path() / "A.java",
                      "// TODO: refactor later\n"
                      "// TODO: remove once merged\n"
                      "class A {}\n");
  CliRun r = cli({"mine", dir.path().string()});
  CHECK(r.err.find("#TODO 2 #TAC 1") != std::string::npos);
  std::istringstream filtered(r.out);
  std::string line;
  int count = 0;
  while (std::getline(filtered, line)) ++count;
  CHECK(count == 1);

  CliRun all = cli({"mine", dir.path().string(), "--all"});
  std::istringstream kept(all.out);
  count = 0;
  while (std::getline(kept, line)) ++count;
  CHECK(count == 2);
}

TEST_CASE("classify: both systems emit Table-5-shaped rows") {
  TempDir dir("cli_classify");
  std::string dataset;
  for (int i = 0; i < 10; ++i) {
    dataset += R"({"trigger":"the long trigger has many tokens inside","action":"remove it","label":"yes"})";
    dataset += "\n";
    dataset += R"({"trigger":"short","action":"keep","label":"no"})";
    dataset += "\n";
  }
  auto datasetPath = dir.path() / "data.jsonl";
  testutil::writeFile(datasetPath, dataset);
  auto embPath = dir.path() / "emb.txt";
  testutil::writeFile(embPath, "the 1 0\nremove 0 1\nkeep 1 1\nshort 0 0\n");

  CliRun r = cli({"classify", "--dataset", datasetPath.string(), "--config", "both",
                  "--embeddings", embPath.string()});
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("system") != std::string::npos);
  CHECK(r.out.find("accuracy") != std::string::npos);
  CHECK(r.out.find("baseline") != std::string::npos);
  CHECK(r.out.find("full") != std::string::npos);
  CHECK(r.err.find("folds=20") != std::string::npos);

  CliRun j = cli({"classify", "--dataset", datasetPath.string(), "--config", "both",
                  "--embeddings", embPath.string(), "--format", "json"});
  nlohmann::json parsed = nlohmann::json::parse(j.out);
  for (const char* system : {"baseline", "full"}) {
    REQUIRE(parsed.contains(system));
    for (const char* key : {"accuracy", "f1", "precision", "recall", "tp", "fp", "fn", "tn"})
      CHECK(parsed[system].contains(key));
  }
}

TEST_CASE("classify: LOOCV on a 3-example dataset logs exactly 3 folds") {
  TempDir dir("cli_classify3");
  auto datasetPath = dir.path() / "data.jsonl";
  testutil::writeFile(datasetPath,
                      R"({"trigger":"a b c d e f","action":"x","label":"yes"})" "\n"
                      R"({"trigger":"a","action":"x","label":"no"})" "\n"
                      R"({"trigger":"b","action":"x","label":"no"})" "\n");
  CliRun r = cli({"classify", "--dataset", datasetPath.string(), "--config", "baseline"});
  CHECK(r.exitCode == 0);
  CHECK(r.err.find("folds=3") != std::string::npos);
}

TEST_CASE("classify: full without embeddings is refused with exit 4") {
  TempDir dir("cli_classify_noemb");
  auto datasetPath = dir.path() / "data.jsonl";
  testutil::writeFile(datasetPath,
                      R"({"trigger":"a","action":"x","label":"yes"})" "\n"
                      R"({"trigger":"b","action":"x","label":"no"})" "\n"
                      R"({"trigger":"c","action":"x","label":"no"})" "\n");
  CliRun r = cli({"classify", "--dataset", datasetPath.string(), "--config", "full"});
  CHECK(r.exitCode == 4);
  CHECK(r.err.find("requires --embeddings") != std::string::npos);
}

TEST_CASE("classify: embedding-only signal lifts full above baseline") {
  // Baseline features are identical across classes: same token counts, same
  // POS tags, same special classes. Only the embedding separates them.
  TempDir dir("cli_signal");
  std::string dataset;
  for (int i = 0; i < 12; ++i) {
    dataset += R"({"trigger":"alpha beta","action":"gamma delta","label":"yes"})";
    dataset += "\n";
    dataset += R"({"trigger":"omega sigma","action":"kappa lambda","label":"no"})";
    dataset += "\n";
  }
  auto datasetPath = dir.path() / "data.jsonl";
  testutil::writeFile(datasetPath, dataset);
  auto embPath = dir.path() / "emb.txt";
  testutil::writeFile(embPath,
                      "alpha 1 0\nbeta 1 0\ngamma 1 0\ndelta 1 0\n"
                      "omega -1 0\nsigma -1 0\nkappa -1 0\nlambda -1 0\n");

  CliRun j = cli({"classify", "--dataset", datasetPath.string(), "--config", "both",
                  "--embeddings", embPath.string(), "--format", "json"});
  nlohmann::json parsed = nlohmann::json::parse(j.out);
  double baseline = parsed["baseline"]["accuracy"].get<double>();
  double full = parsed["full"]["accuracy"].get<double>();
  CHECK(full > baseline);
  CHECK(full == doctest::Approx(1.0));
}

TEST_CASE("tokens: empty action list counts zero; footer averages the columns") {
  TempDir dir("cli_tokens");
  testutil::writeFile(dir.path() / "A.java",
                      "class A {\n"
                      "  @TrigItMethod boolean unusedTrigger() { return "
                      "TrigIt.hasClass(\"X\"); }\n"
                      "}\n");
  CliRun r = cli({"tokens", dir.path().string(), "--format", "json"});
  nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j["units"].size() == 1);
  CHECK(j["units"][0]["action"].get<int>() == 0);
  // trigger: hasClass + "X" (TrigIt and punctuation excluded)
  CHECK(j["units"][0]["trigger"].get<int>() == 2);
  // structure: @ TrigItMethod boolean unusedTrigger return
  CHECK(j["units"][0]["structure"].get<int>() == 5);
  CHECK(j["units"][0]["total"].get<int>() == 7);
  CHECK(j["avg"]["total"].get<double>() == doctest::Approx(7.0));

  CliRun text = cli({"tokens", dir.path().string()});
  CHECK(text.out.find("Avg.") != std::string::npos);
  CHECK(text.out.find("total") != std::string::npos);
  CHECK(text.out.find("trigger") != std::string::npos);
  CHECK(text.out.find("action") != std::string::npos);
  CHECK(text.out.find("structure") != std::string::npos);
}

TEST_CASE("tokens: fig3 checkMerge counts match the hand count under the frozen rule") {
  // countable tokens exclude . , ( ) { } ; and every TrigIt identifier:
  //   trigger:   ! hasClass "Mapper" || ! hasClass "FieldMapper"        = 7
  //   action:    getMethod simpleName setProtected                      = 3
  //   structure: @ TrigItMethod public static void checkMerge if        = 7
  CliRun r = cli({"tokens", fixture("fig3"), "--format", "json"});
  nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j["units"].size() == 1);
  CHECK(j["units"][0]["trigger"].get<int>() == 7);
  CHECK(j["units"][0]["action"].get<int>() == 3);
  CHECK(j["units"][0]["structure"].get<int>() == 7);
  CHECK(j["units"][0]["total"].get<int>() == 17);
}

TEST_CASE("tokens: total equals structure + trigger + action for every unit") {
  TempDir dir("cli_tokens_sum");
  testutil::copyFixture("fig2", dir.path());
  testutil::copyFixture("fig3", dir.path());
  testutil::copyFixture("fig1", dir.path());
  CliRun r = cli({"tokens", dir.path().string(), "--format", "json"});
  nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j["units"].size() == 3);
  for (const auto& u : j["units"]) {
    CHECK(u["total"].get<int>() ==
          u["structure"].get<int>() + u["trigger"].get<int>() + u["action"].get<int>());
  }
}
