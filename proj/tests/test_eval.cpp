#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "support/test_util.hpp"
#include "trigit/eval.hpp"
#include "trigit/parser.hpp"
#include "trigit/frontend.hpp"
#include "trigit/printer.hpp"

using namespace trigit;
using testutil::TempDir;

namespace {

ProjectBuild buildFrom(const TempDir& dir, const std::string& source,
                       const std::string& name = "T.java") {
  testutil::writeFile(dir.path() / name, source);
  return buildProjectModel(dir.path());
}

std::string modelDigest(const ProjectModel& m) {
  std::ostringstream out;
  for (const ClassModel& c : m.classes) {
    out << c.qualifiedName << "#" << static_cast<int>(c.modifiers.visibility);
    for (const MethodModel& me : c.methods)
      out << "|m:" << me.name << static_cast<int>(me.modifiers.visibility)
          << me.modifiers.isStatic << me.modifiers.isFinal << me.typeText;
    for (const FieldModel& f : c.fields)
      out << "|f:" << f.name << static_cast<int>(f.modifiers.visibility) << f.typeText;
    out << ";";
  }
  for (const BuildConfigModel& b : m.buildConfigs)
    out << b.path << "=" << b.javaVersion.major << "@" << b.versionLine << ";";
  return out.str();
}

std::string reportDigest(const RunReport& r) {
  std::ostringstream out;
  for (const auto& t : r.triggers)
    out << t.unit << "|" << t.satisfied << "|" << t.unevaluable << "|" << t.explanation
        << "\n";
  for (const auto& e : r.errors)
    out << e.unit << "|" << encodingErrorCategoryName(e.category) << "|" << e.message
        << "\n";
  for (const auto& d : r.diagnostics) out << d << "\n";
  for (const auto& e : r.edits.edits())
    out << e.file << ":" << e.span.begin << "-" << e.span.end << "|"
        << editOriginName(e.origin) << "|" << e.replacement << "\n";
  return out.str();
}

}  // namespace

TEST_CASE("fig3 trigger is false with both classes, true without FieldMapper") {
  ProjectBuild full = buildProjectModel(testutil::fixtureDir() / "fig3");
  FrontendResult feFull = runFrontend(full);
  REQUIRE(feFull.units.size() == 1);
  std::string before = modelDigest(full.model);
  TriggerResult rFull = evalQuery(*feFull.units[0].query, full.model,
                                  feFull.units[0].enclosingClass, "u");
  CHECK(modelDigest(full.model) == before);  // evaluation is pure
  CHECK_FALSE(rFull.satisfied);
  CHECK(rFull.explanation.find("Mapper exists") != std::string::npos);

  TempDir dir("fig3sat");
  testutil::copyFixture("fig3", dir.path(), "FieldMapper.java");
  ProjectBuild sat = buildProjectModel(dir.path());
  FrontendResult feSat = runFrontend(sat);
  TriggerResult rSat = evalQuery(*feSat.units[0].query, sat.model,
                                 feSat.units[0].enclosingClass, "u");
  CHECK(rSat.satisfied);
  CHECK(rSat.explanation.find("class FieldMapper does not exist") != std::string::npos);
}

TEST_CASE("fig2 explanation follows the '<reason>; file: <path>, line: <n>' template") {
  ProjectBuild build = buildProjectModel(testutil::fixtureDir() / "fig2");
  FrontendResult fe = runFrontend(build);
  REQUIRE(fe.units.size() == 1);
  TriggerResult r = evalQuery(*fe.units[0].query, build.model,
                              fe.units[0].enclosingClass, "u");
  CHECK(r.satisfied);
  CHECK(r.explanation == "Java version 1.7 >= 1.6; file: trigit.properties, line: 1");
  REQUIRE(r.evidence.has_value());
  CHECK(r.evidence->file == "trigit.properties");
  CHECK(r.evidence->line == 1);
}

TEST_CASE("hasClass is equivalent to getClasses().findAny(n).isPresent()") {
  ProjectBuild build = buildProjectModel(testutil::fixtureDir() / "fig3");
  for (const char* name : {"Mapper", "FieldMapper", "Ghost"}) {
    TempDir dir("hasclass");
    ProjectBuild probe = buildFrom(
        dir,
        std::string("class Probe {\n") +
            "  @TrigItMethod boolean a() { return TrigIt.hasClass(\"" + name + "\"); }\n" +
            "  @TrigItMethod boolean b() { return "
            "TrigIt.getClasses().findAny(\"" + name + "\").isPresent(); }\n" +
            "}\n",
        "Probe.java");
    FrontendResult fe = runFrontend(probe);
    REQUIRE(fe.units.size() == 2);
    TriggerResult a = evalQuery(*fe.units[0].query, build.model, "Probe", "a");
    TriggerResult b = evalQuery(*fe.units[1].query, build.model, "Probe", "b");
    CHECK(a.satisfied == b.satisfied);
  }
}

TEST_CASE("checkEncoding reports the missing field of the worked example") {
  ProjectBuild build = buildProjectModel(testutil::fixtureDir() / "encerr");
  FrontendResult fe = runFrontend(build);
  REQUIRE(fe.units.size() == 1);
  auto errors = checkEncoding(fe.units[0], build.model);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].category == EncodingErrorCategory::MissingReferent);
  CHECK(errors[0].message.find("'f'") != std::string::npos);
}

TEST_CASE("existence tests are exempt from encoding checks") {
  TempDir dir("exempt");
  ProjectBuild build = buildFrom(
      dir,
      "class A {\n"
      "  @TrigItMethod boolean t() { return TrigIt.hasClass(\"Ghost\") || "
      "TrigIt.getClasses().findAny(\"Phantom\").isPresent(); }\n"
      "}\n");
  FrontendResult fe = runFrontend(build);
  REQUIRE(fe.units.size() == 1);
  CHECK(checkEncoding(fe.units[0], build.model).empty());
}

TEST_CASE("checkEncoding resolves contextual selectors against the enclosing class") {
  ProjectBuild build = buildProjectModel(testutil::fixtureDir() / "fig3");
  FrontendResult fe = runFrontend(build);
  CHECK(checkEncoding(fe.units[0], build.model).empty());  // simpleName resolves
}

TEST_CASE("empty unit list yields no encoding errors") {
  TempDir dir("nounits");
  ProjectBuild build = buildFrom(dir, "class A { void m() {} }\n");
  FrontendResult fe = runFrontend(build);
  CHECK(fe.units.empty());
  CHECK(fe.errors.empty());
}

TEST_CASE("executeActions: fig3 action replaces exactly the public keyword") {
  TempDir dir("fig3act");
  testutil::copyFixture("fig3", dir.path(), "FieldMapper.java");
  ProjectBuild build = buildProjectModel(dir.path());
  FrontendResult fe = runFrontend(build);
  std::vector<std::string> diags;
  std::vector<Edit> edits = executeActions(fe.units[0], build.model, build, &diags);
  REQUIRE(edits.size() == 1);
  CHECK(edits[0].replacement == "protected");
  std::string text = sourceOfUnit(build.files[0].unit);
  CHECK(text.substr(edits[0].span.begin, edits[0].span.end - edits[0].span.begin) ==
        "public");
}

TEST_CASE("executeActions: already-private target yields a diagnostic, no edit") {
  TempDir dir("alreadypriv");
  ProjectBuild build = buildFrom(
      dir,
      "class A {\n"
      "  private int f;\n"
      "  @TrigItMethod void t() { if (TrigIt.hasClass(\"A\")) "
      "TrigIt.getField(\"f\").setPrivate(); }\n"
      "}\n",
      "A.java");
  FrontendResult fe = runFrontend(build);
  std::vector<std::string> diags;
  std::vector<Edit> edits = executeActions(fe.units[0], build.model, build, &diags);
  CHECK(edits.empty());
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].find("already private") != std::string::npos);
}

TEST_CASE("executeActions: package-private visibility inserts before modifiers") {
  TempDir dir("insertvis");
  ProjectBuild build = buildFrom(
      dir,
      "class A {\n"
      "    static int f;\n"
      "    int g;\n"
      "  @TrigItMethod void t() { if (TrigIt.hasClass(\"A\")) { "
      "TrigIt.getField(\"f\").setPrivate(); TrigIt.getField(\"g\").setPublic(); } }\n"
      "}\n",
      "A.java");
  FrontendResult fe = runFrontend(build);
  std::vector<Edit> edits = executeActions(fe.units[0], build.model, build, nullptr);
  REQUIRE(edits.size() == 2);
  EditSet set;
  for (Edit& e : edits) CHECK(set.add(std::move(e)));
  auto out = materializeEdits(set, build);
  CHECK(out["A.java"].find("private static int f;") != std::string::npos);
  CHECK(out["A.java"].find("public int g;") != std::string::npos);
}

TEST_CASE("executeActions: setStatic and setFinal insert and remove keywords") {
  TempDir dir("setstatic");
  ProjectBuild build = buildFrom(
      dir,
      "class A {\n"
      "    public int a;\n"
      "    public static final int b = 1;\n"
      "  @TrigItMethod void t() { if (TrigIt.hasClass(\"A\")) { "
      "TrigIt.getField(\"a\").setStatic(true); TrigIt.getField(\"b\").setStatic(false); "
      "TrigIt.getField(\"a\").setFinal(true); } }\n"
      "}\n",
      "A.java");
  FrontendResult fe = runFrontend(build);
  std::vector<Edit> edits = executeActions(fe.units[0], build.model, build, nullptr);
  EditSet set;
  for (Edit& e : edits) CHECK(set.add(std::move(e)));
  auto out = materializeEdits(set, build);
  CHECK(out["A.java"].find("public static final int a;") != std::string::npos);
  CHECK(out["A.java"].find("public final int b = 1;") != std::string::npos);
}

TEST_CASE("executeActions: removeMethod deletes the whole declaration span") {
  TempDir dir("removem");
  ProjectBuild build = buildFrom(
      dir,
      "class A {\n"
      "    int keep;\n"
      "\n"
      "    // helper that is going away\n"
      "    public String gone(int x) {\n"
      "        prepare();\n"
      "        return null;\n"
      "    }\n"
      "\n"
      "    int alsoKeep;\n"
      "  @TrigItMethod void t() { if (TrigIt.hasClass(\"A\")) "
      "TrigIt.getMethod(\"gone\").removeMethod(); }\n"
      "}\n",
      "A.java");
  FrontendResult fe = runFrontend(build);
  std::vector<Edit> edits = executeActions(fe.units[0], build.model, build, nullptr);
  REQUIRE(edits.size() == 1);
  // span oracle: the edit covers the whole declaration span (plus the
  // surrounding trivia the deletion rule owns)
  const MethodModel* gone = methodsNamed(build.model.classes[0], "gone").front();
  CHECK(edits[0].span.begin <= gone->declSpan.begin);
  CHECK(edits[0].span.end >= gone->declSpan.end);
  EditSet set;
  set.add(std::move(edits[0]));
  auto out = materializeEdits(set, build);
  CHECK(out["A.java"].find("String gone") == std::string::npos);
  CHECK(out["A.java"].find("going away") == std::string::npos);
  CHECK(out["A.java"].find("int keep;") != std::string::npos);
  CHECK(out["A.java"].find("int alsoKeep;") != std::string::npos);
  // exactly one blank line left between the survivors
  CHECK(out["A.java"].find("    int keep;\n\n    int alsoKeep;") != std::string::npos);
}

TEST_CASE("guard-fold truth table: all 8 combinations keep the selected branch") {
  for (bool value : {false, true}) {
    for (bool negated : {false, true}) {
      for (bool hasElse : {false, true}) {
        CAPTURE(value);
        CAPTURE(negated);
        CAPTURE(hasElse);
        std::string cond = negated ? "!t()" : "t()";
        std::string src = "class A {\n";
        src += "    void m() {\n";
        src += "        before();\n";
        src += "        if (" + cond + ") {\n";
        src += "            keepThen();\n";
        src += "        }";
        src += hasElse ? " else {\n            keepElse();\n        }\n" : "\n";
        src += "        after();\n";
        src += "    }\n";
        src += "    @TrigItMethod boolean t() { return TrigIt.hasClass(\"X\"); }\n";
        src += "}\n";
        TempDir dir("fold");
        ProjectBuild build = buildFrom(dir, src, "A.java");
        FrontendResult fe = runFrontend(build);
        REQUIRE(fe.units.size() == 1);
        std::vector<Edit> edits = foldGuards(fe.units[0].guardSites, value, build, "u");
        REQUIRE(edits.size() == 1);
        EditSet set;
        set.add(std::move(edits[0]));
        std::string out = materializeEdits(set, build).at("A.java");

        bool effective = value != negated;
        // the guarded if and its trigger call site are gone (the trigger's
        // own declaration is untouched by foldGuards)
        std::string beforeDecl = out.substr(0, out.find("@TrigItMethod"));
        CHECK(out.find("if (") == std::string::npos);
        CHECK(beforeDecl.find("t()") == std::string::npos);
        CHECK((out.find("keepThen();") != std::string::npos) == effective);
        CHECK((out.find("keepElse();") != std::string::npos) == (!effective && hasElse));
        CHECK(out.find("before();") != std::string::npos);
        CHECK(out.find("after();") != std::string::npos);
        if (effective)  // branch contents re-anchored at the if's indentation
          CHECK(out.find("        keepThen();\n        after();") != std::string::npos);
      }
    }
  }
}

TEST_CASE("removeSatisfiedUnits removes exactly the satisfied declarations") {
  TempDir dir("remove2");
  ProjectBuild build = buildFrom(
      dir,
      "class A {\n"
      "    @TrigItMethod\n"
      "    boolean tYes() { return TrigIt.hasClass(\"A\"); }\n"
      "\n"
      "    @TrigItMethod\n"
      "    boolean tNo() { return TrigIt.hasClass(\"Ghost\"); }\n"
      "}\n",
      "A.java");
  FrontendResult fe = runFrontend(build);
  REQUIRE(fe.units.size() == 2);
  std::vector<TriggerResult> results(2);
  results[0].satisfied = true;
  results[1].satisfied = false;
  std::vector<Edit> edits = removeSatisfiedUnits(fe.units, results, build);
  REQUIRE(edits.size() == 1);
  CHECK(edits[0].origin == EditOrigin::MethodRemoval);
  EditSet set;
  set.add(std::move(edits[0]));
  std::string out = materializeEdits(set, build).at("A.java");
  CHECK(out.find("tYes") == std::string::npos);
  CHECK(out.find("tNo") != std::string::npos);

  // both satisfied: two non-overlapping deletions
  results[1].satisfied = true;
  std::vector<Edit> both = removeSatisfiedUnits(fe.units, results, build);
  REQUIRE(both.size() == 2);
  EditSet set2;
  CHECK(set2.add(std::move(both[0])));
  CHECK(set2.add(std::move(both[1])));
}

TEST_CASE("renderPatch: empty edit set renders the empty patch") {
  ProjectBuild build = buildProjectModel(testutil::fixtureDir() / "fig3");
  EditSet empty;
  Patch p = renderPatch(empty, build);
  CHECK(p.text.empty());
  CHECK(p.filesTouched == 0);
  CHECK(p.hunks == 0);
}

TEST_CASE("renderPatch: single modifier replacement is one hunk with one -/+ pair") {
  TempDir dir("onehunk");
  ProjectBuild build = buildFrom(dir,
                                 "class A {\n"
                                 "    public int f;\n"
                                 "}\n",
                                 "A.java");
  const FieldModel& f = build.model.classes[0].fields[0];
  EditSet set;
  Edit e;
  e.file = "A.java";
  e.span = *f.modifiers.visibilitySpan;
  e.replacement = "private";
  set.add(std::move(e));
  Patch p = renderPatch(set, build);
  CHECK(p.filesTouched == 1);
  CHECK(p.hunks == 1);
  int minus = 0, plus = 0;
  std::istringstream in(p.text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("---", 0) == 0 || line.rfind("+++", 0) == 0) continue;
    if (!line.empty() && line[0] == '-') ++minus;
    if (!line.empty() && line[0] == '+') ++plus;
  }
  CHECK(minus == 1);
  CHECK(plus == 1);
}

TEST_CASE("renderPatch: missing trailing newline gets the marker") {
  TempDir dir("nonl");
  ProjectBuild build = buildFrom(dir, "class A {\n    public int f;\n}", "A.java");
  const FieldModel& f = build.model.classes[0].fields[0];
  EditSet set;
  Edit e;
  e.file = "A.java";
  e.span = *f.modifiers.visibilitySpan;
  e.replacement = "private";
  set.add(std::move(e));
  Patch p = renderPatch(set, build);
  CHECK(p.text.find("\\ No newline at end of file") != std::string::npos);
}

TEST_CASE("the fig3 satisfied patch matches the golden diff byte for byte") {
  TempDir dir("fig3gold");
  testutil::copyFixture("fig3", dir.path(), "FieldMapper.java");
  ProjectBuild build = buildProjectModel(dir.path());
  FrontendResult fe = runFrontend(build);
  EvalOptions opts;
  opts.mode = RunMode::Patch;
  EvalOutput out = evaluateAll(build, fe, opts);
  REQUIRE(out.patch.has_value());
  std::string golden = testutil::readFile(testutil::fixtureDir() / "golden/fig3.patch");
  CHECK(out.patch->text == golden);
}

TEST_CASE("external patch application equals direct materialization") {
  TempDir dir("patcheq");
  testutil::copyFixture("fig3", dir.path(), "FieldMapper.java");
  ProjectBuild build = buildProjectModel(dir.path());
  FrontendResult fe = runFrontend(build);
  EvalOptions opts;
  opts.mode = RunMode::Patch;
  EvalOutput out = evaluateAll(build, fe, opts);

  TempDir work("patcheq_apply");
  testutil::copyFixture("fig3", work.path(), "FieldMapper.java");
  testutil::writeFile(work.path() / "changes.patch", out.patch->text);
  std::string cmd = "cd '" + work.path().string() + "' && patch -p1 --quiet < changes.patch";
  REQUIRE(std::system(cmd.c_str()) == 0);

  auto direct = materializeEdits(out.report.edits, build);
  CHECK(testutil::readFile(work.path() / "Mapper.java") == direct.at("Mapper.java"));
}

TEST_CASE("evaluateAll: fig1 default mode reports unsatisfied and zero edits") {
  ProjectBuild build = buildProjectModel(testutil::fixtureDir() / "fig1");
  FrontendResult fe = runFrontend(build);
  EvalOutput out = evaluateAll(build, fe, EvalOptions{});
  REQUIRE(out.report.triggers.size() == 1);
  CHECK(out.report.triggers[0].unit.find("trigItIsPublic") != std::string::npos);
  CHECK_FALSE(out.report.triggers[0].satisfied);
  CHECK(out.report.triggers[0].explanation.find("is not public") != std::string::npos);
  CHECK(out.report.edits.empty());
}

TEST_CASE("evaluateAll: fig1 trigger flips when the factory is made public") {
  TempDir dir("fig1pub");
  std::string src =
      testutil::readFile(testutil::fixtureDir() / "fig1/AbstractStreamingHasher.java");
  std::size_t at = src.find("private static AbstractStreamingHasher create");
  REQUIRE(at != std::string::npos);
  src.replace(at, 7, "public ");
  testutil::writeFile(dir.path() / "AbstractStreamingHasher.java", src);
  ProjectBuild build = buildProjectModel(dir.path());
  FrontendResult fe = runFrontend(build);
  EvalOutput out = evaluateAll(build, fe, EvalOptions{});
  REQUIRE(out.report.triggers.size() == 1);
  CHECK(out.report.triggers[0].satisfied);
}

TEST_CASE("assume-true forces every trigger; no-action suppresses edits") {
  ProjectBuild build = buildProjectModel(testutil::fixtureDir() / "fig3");
  FrontendResult fe = runFrontend(build);
  EvalOptions opts;
  opts.mode = RunMode::Patch;
  opts.assumeTrue = true;
  opts.noAction = true;
  EvalOutput out = evaluateAll(build, fe, opts);
  for (const TriggerResult& t : out.report.triggers) {
    CHECK(t.satisfied);
    CHECK(t.explanation == "forced by assume-true");
  }
  CHECK(out.report.edits.empty());
  REQUIRE(out.patch.has_value());
  CHECK(out.patch->text.empty());
}

TEST_CASE("deferred-edit law: no-action and fold agree on evaluation output") {
  TempDir dir("law");
  testutil::copyFixture("fig3", dir.path(), "FieldMapper.java");
  ProjectBuild build = buildProjectModel(dir.path());
  FrontendResult fe = runFrontend(build);

  EvalOptions noAction;
  noAction.mode = RunMode::Fold;
  noAction.noAction = true;
  EvalOptions fold;
  fold.mode = RunMode::Fold;
  EvalOutput a = evaluateAll(build, fe, noAction);
  EvalOutput b = evaluateAll(build, fe, fold);

  auto evalOnly = [](const RunReport& r) {
    std::ostringstream out;
    for (const auto& t : r.triggers)
      out << t.unit << "|" << t.satisfied << "|" << t.explanation << "\n";
    for (const auto& e : r.errors) out << e.unit << "|" << e.message << "\n";
    return out.str();
  };
  CHECK(evalOnly(a.report) == evalOnly(b.report));
  CHECK(a.report.edits.empty());
  CHECK_FALSE(b.report.edits.empty());
}

TEST_CASE("two identical runs are byte-identical (timings aside)") {
  TempDir dir("determinism");
  testutil::copyFixture("fig2", dir.path());
  testutil::copyFixture("fig3", dir.path(), "FieldMapper.java");
  ProjectBuild b1 = buildProjectModel(dir.path());
  ProjectBuild b2 = buildProjectModel(dir.path());
  FrontendResult f1 = runFrontend(b1);
  FrontendResult f2 = runFrontend(b2);
  EvalOptions opts;
  opts.mode = RunMode::Patch;
  EvalOutput o1 = evaluateAll(b1, f1, opts);
  EvalOutput o2 = evaluateAll(b2, f2, opts);
  CHECK(reportDigest(o1.report) == reportDigest(o2.report));
  CHECK(o1.patch->text == o2.patch->text);
}

TEST_CASE("combined fig2+fig3 patch touches 2 files with folds, one modifier "
          "change and two unit deletions") {
  TempDir dir("combined");
  testutil::copyFixture("fig2", dir.path());
  testutil::copyFixture("fig3", dir.path(), "FieldMapper.java");
  ProjectBuild build = buildProjectModel(dir.path());
  FrontendResult fe = runFrontend(build);
  EvalOptions opts;
  opts.mode = RunMode::Patch;
  EvalOutput out = evaluateAll(build, fe, opts);
  REQUIRE(out.patch.has_value());
  CHECK(out.patch->filesTouched == 2);

  int folds = 0, removals = 0, explicitActions = 0;
  for (const Edit& e : out.report.edits.edits()) {
    if (e.origin == EditOrigin::GuardFold) ++folds;
    if (e.origin == EditOrigin::MethodRemoval) ++removals;
    if (e.origin == EditOrigin::ExplicitAction) ++explicitActions;
  }
  CHECK(folds == 2);
  CHECK(removals == 2);
  CHECK(explicitActions == 1);

  // the transformed sources still parse
  EvalOptions foldOpts;
  foldOpts.mode = RunMode::Fold;
  EvalOutput folded = evaluateAll(build, fe, foldOpts);
  for (const auto& [path, text] : folded.transformed) {
    if (path.find(".java") == std::string::npos) continue;
    CHECK_NOTHROW(parseSource(text, path));
  }
}

TEST_CASE("stray trigger call statements fold away with the satisfied unit") {
  TempDir dir("stray");
  ProjectBuild build = buildFrom(
      dir,
      "class A {\n"
      "    void m() {\n"
      "        t();\n"
      "        work();\n"
      "    }\n"
      "    @TrigItMethod boolean t() { return TrigIt.hasClass(\"A\"); }\n"
      "}\n",
      "A.java");
  FrontendResult fe = runFrontend(build);
  EvalOptions opts;
  opts.mode = RunMode::Fold;
  EvalOutput out = evaluateAll(build, fe, opts);
  std::string text = out.transformed.at("A.java");
  CHECK(text.find("t()") == std::string::npos);
  CHECK(text.find("work();") != std::string::npos);
  bool sawCallsite = false;
  for (const Edit& e : out.report.edits.edits())
    if (e.origin == EditOrigin::CallsiteFold) sawCallsite = true;
  CHECK(sawCallsite);
}

TEST_CASE("nested guards of one trigger: outer folds, inner conflict is surfaced") {
  TempDir dir("nestedguard");
  ProjectBuild build = buildFrom(
      dir,
      "class A {\n"
      "    void m() {\n"
      "        if (t()) {\n"
      "            if (t()) {\n"
      "                inner();\n"
      "            }\n"
      "        }\n"
      "    }\n"
      "    @TrigItMethod boolean t() { return TrigIt.hasClass(\"A\"); }\n"
      "}\n",
      "A.java");
  FrontendResult fe = runFrontend(build);
  REQUIRE(fe.units.size() == 1);
  REQUIRE(fe.units[0].guardSites.size() == 2);
  EvalOptions opts;
  opts.mode = RunMode::Fold;
  EvalOutput out = evaluateAll(build, fe, opts);
  // the outer site folds; the contained site cannot also be edited and the
  // conflict is reported
  bool conflictDiag = false;
  for (const std::string& d : out.report.diagnostics)
    if (d.find("conflicting edit skipped") != std::string::npos) conflictDiag = true;
  CHECK(conflictDiag);
  CHECK(out.transformed.at("A.java").find("inner();") != std::string::npos);
}

TEST_CASE("unevaluable units block their actions but not other units") {
  TempDir dir("blocked");
  ProjectBuild build = buildFrom(
      dir,
      "class A {\n"
      "    int good;\n"
      "    @TrigItMethod void bad() { if (TrigIt.hasClass(\"A\")) "
      "TrigIt.getField(\"ghost\").setPrivate(); }\n"
      "    @TrigItMethod void fine() { if (TrigIt.hasClass(\"A\")) "
      "TrigIt.getField(\"good\").setPrivate(); }\n"
      "}\n",
      "A.java");
  FrontendResult fe = runFrontend(build);
  REQUIRE(fe.units.size() == 2);
  EvalOptions opts;
  opts.mode = RunMode::Fold;
  EvalOutput out = evaluateAll(build, fe, opts);
  REQUIRE(out.report.triggers.size() == 2);
  CHECK(out.report.triggers[0].unevaluable);
  CHECK_FALSE(out.report.triggers[0].satisfied);
  CHECK(out.report.triggers[0].explanation.rfind("unevaluable", 0) == 0);
  CHECK(out.report.triggers[1].satisfied);
  // only the fine unit produced edits
  for (const Edit& e : out.report.edits.edits())
    CHECK(e.unit.find("bad") == std::string::npos);
  CHECK(out.transformed.at("A.java").find("private int good;") != std::string::npos);
}
