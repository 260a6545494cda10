#include <doctest.h>

#include <random>

#include "support/generators.hpp"
#include "support/test_util.hpp"
#include "trigit/diff.hpp"
#include "trigit/eval.hpp"
#include "trigit/frontend.hpp"
#include "trigit/lexer.hpp"
#include "trigit/parser.hpp"
#include "trigit/printer.hpp"

using namespace trigit;
using testutil::TempDir;

TEST_CASE("fuzzed subset programs: lossless round-trip and trivia concatenation") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 60; ++i) {
    testutil::GeneratedProgram prog = testutil::genProgram(rng, "p" + std::to_string(i));
    CAPTURE(i);
    CompilationUnit unit = parseSource(prog.source, "fuzz.java");
    CHECK(printUnit(unit) == prog.source);

    std::string concat;
    for (const Token& t : unit.tokens) {
      for (const TriviaRun& r : t.leading) concat += r.text;
      concat += t.text;
    }
    CHECK(concat == prog.source);
  }
}

TEST_CASE("fuzzed programs parse deterministically with contained spans") {
  std::mt19937 rng(99);
  for (int i = 0; i < 20; ++i) {
    testutil::GeneratedProgram prog = testutil::genProgram(rng, "d" + std::to_string(i));
    CompilationUnit a = parseSource(prog.source, "a.java");
    CompilationUnit b = parseSource(prog.source, "a.java");
    CHECK(structurallyEqual(*a.root, *b.root));
    auto contained = [](const AstNode& node, auto&& self) -> void {
      for (const AstNodePtr& c : node.children) {
        CHECK(node.span.contains(c->span));
        self(*c, self);
      }
    };
    contained(*a.root, contained);
  }
}

TEST_CASE("generated corpus: model class count equals the generator manifest") {
  TempDir dir("manifest");
  std::mt19937 rng(7);
  int expected = 0;
  for (int i = 0; i < 100; ++i) {
    testutil::GeneratedProgram prog = testutil::genProgram(rng, "m" + std::to_string(i));
    expected += prog.classCount;
    testutil::writeFile(dir.path() / ("F" + std::to_string(i) + ".java"), prog.source);
  }
  ProjectBuild build = buildProjectModel(dir.path());
  REQUIRE(build.parseErrors.empty());
  CHECK(build.warnings.empty());  // no duplicate-FQN drops
  CHECK(static_cast<int>(build.model.classes.size()) == expected);

  // brute-force AST traversal count agrees too
  int traversal = 0;
  for (const ParsedFile& f : build.files)
    visit(*f.unit.root, [&](const AstNode& n) {
      if (n.kind == NodeKind::ClassDecl) ++traversal;
      return true;
    });
  CHECK(traversal == expected);
}

TEST_CASE("strip agrees with the brute-force keep-only-annotated-methods filter") {
  std::mt19937 rng(4242);
  for (int i = 0; i < 15; ++i) {
    std::string source = testutil::genStripClass(rng);
    CAPTURE(source);
    CompilationUnit unit = parseSource(source, "S.java");
    const AstNode& cls = *unit.root->children[0];
    StripResult stripped = stripForEvaluation(cls);

    // independent filter: clone the class, keep header children and only
    // annotated direct methods
    auto oracle = std::make_unique<AstNode>(cls.kind, cls.span, cls.text);
    bool nameSeen = false;
    for (const AstNodePtr& c : cls.children) {
      bool member = nameSeen && (c->kind == NodeKind::FieldDecl ||
                                 c->kind == NodeKind::MethodDecl ||
                                 c->kind == NodeKind::StaticBlock ||
                                 c->kind == NodeKind::ClassDecl);
      if (c->kind == NodeKind::NameRef) nameSeen = true;
      if (member && !(c->kind == NodeKind::MethodDecl && hasAnnotation(*c, "TrigItMethod")))
        continue;
      oracle->children.push_back(cloneNode(*c));
    }
    CHECK(structurallyEqual(*stripped.classDecl, *oracle));

    StripResult twice = stripForEvaluation(*stripped.classDecl);
    CHECK(structurallyEqual(*stripped.classDecl, *twice.classDecl));
  }
}

TEST_CASE("20 generated substitution cases match the by-construction oracle") {
  std::mt19937 rng(1234);
  for (int i = 0; i < 20; ++i) {
    testutil::SubstitutionCase c = testutil::genSubstitutionCase(rng);
    CAPTURE(c.input);
    auto toks = tokenize(c.input, "expr.java");
    AstNodePtr expr = parseExpression(toks, "expr.java");
    SubstitutionContext ctx{"Ctx", {}};
    nameSubstitute(expr, ctx);
    CHECK(renderExpr(*expr) == c.expected);

    // idempotence on the substituted form
    auto toks2 = tokenize(c.expected, "expr.java");
    AstNodePtr expr2 = parseExpression(toks2, "expr.java");
    nameSubstitute(expr2, ctx);
    CHECK(renderExpr(*expr2) == c.expected);
  }
}

TEST_CASE("randomized edit sets: external patch equals direct materialization") {
  std::mt19937 rng(321);
  TempDir dir("patch_rand");
  int rounds = 0;
  for (int i = 0; i < 20; ++i) {
    testutil::GeneratedProgram prog = testutil::genProgram(rng, "e" + std::to_string(i));
    auto edits = testutil::genEditSet(rng, prog.source);
    if (edits.empty()) continue;
    std::vector<TextEdit> textEdits;
    for (const testutil::RandomEdit& e : edits) {
      Span s;
      s.begin = e.begin;
      s.end = e.end;
      textEdits.push_back({s, e.replacement});
    }
    std::string after = applyTextEdits(prog.source, textEdits);
    std::string diff = unifiedDiff(prog.source, after, "a/F.java", "b/F.java");
    if (diff.empty()) {
      CHECK(after == prog.source);
      continue;
    }
    auto round = dir.path() / ("r" + std::to_string(i));
    testutil::writeFile(round / "F.java", prog.source);
    testutil::writeFile(round / "changes.patch", diff);
    std::string cmd =
        "cd '" + round.string() + "' && patch -p1 --quiet < changes.patch 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(testutil::readFile(round / "F.java") == after);
    ++rounds;
  }
  CHECK(rounds >= 10);  // the generator must actually exercise the property
}
