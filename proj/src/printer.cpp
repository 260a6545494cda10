#include "trigit/printer.hpp"

#include <algorithm>
#include <stdexcept>

namespace trigit {

std::string sourceOfUnit(const CompilationUnit& unit) {
  std::string out;
  for (const Token& t : unit.tokens) {
    for (const TriviaRun& run : t.leading) out += run.text;
    out += t.text;
  }
  return out;
}

std::string applyTextEdits(const std::string& text, std::span<const TextEdit> edits) {
  std::vector<const TextEdit*> order;
  order.reserve(edits.size());
  for (const TextEdit& e : edits) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](const TextEdit* a, const TextEdit* b) {
    if (a->span.begin != b->span.begin) return a->span.begin < b->span.begin;
    return a->span.end < b->span.end;
  });

  std::string out;
  std::size_t cursor = 0;
  for (const TextEdit* e : order) {
    if (e->span.begin < cursor)
      throw std::invalid_argument("overlapping text edits");
    if (e->span.end > text.size())
      throw std::invalid_argument("edit span outside file");
    out.append(text, cursor, e->span.begin - cursor);
    out += e->replacement;
    cursor = e->span.end;
  }
  out.append(text, cursor, text.size() - cursor);
  return out;
}

std::string printUnit(const CompilationUnit& unit, std::span<const TextEdit> edits) {
  std::string original = sourceOfUnit(unit);
  if (edits.empty()) return original;
  return applyTextEdits(original, edits);
}

namespace {

// Precedence: 0 = "||", 1 = "&&", 2 = "!", 3 = postfix/primary.
int precedenceOf(const AstNode& e) {
  if (e.kind != NodeKind::LogicExpr) return 3;
  if (e.text == "||") return 0;
  if (e.text == "&&") return 1;
  return 2;
}

void render(const AstNode& e, int parentPrec, std::string& out) {
  int prec = precedenceOf(e);
  bool parens = prec < parentPrec;
  if (parens) out += "(";
  switch (e.kind) {
    case NodeKind::LogicExpr: {
      if (e.text == "!") {
        out += "!";
        render(*e.children.front(), 2, out);
      } else {
        for (std::size_t i = 0; i < e.children.size(); ++i) {
          if (i) out += " " + e.text + " ";
          render(*e.children[i], prec + 1, out);
        }
      }
      break;
    }
    case NodeKind::CallChain: {
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        const AstNode& link = *e.children[i];
        if (i > 0) out += ".";
        if (link.kind == NodeKind::MemberAccess) {
          out += link.text;
          if (link.isCall) {
            out += "(";
            for (std::size_t a = 0; a < link.children.size(); ++a) {
              if (a) out += ", ";
              render(*link.children[a], 0, out);
            }
            out += ")";
          }
        } else {
          render(link, 3, out);
        }
      }
      break;
    }
    case NodeKind::MemberAccess: {
      out += e.text;
      if (e.isCall) {
        out += "(";
        for (std::size_t a = 0; a < e.children.size(); ++a) {
          if (a) out += ", ";
          render(*e.children[a], 0, out);
        }
        out += ")";
      }
      break;
    }
    case NodeKind::Literal:
    case NodeKind::NameRef:
      out += e.text;
      break;
    default:
      out += e.text;
      break;
  }
  if (parens) out += ")";
}

}  // namespace

std::string renderExpr(const AstNode& expr) {
  std::string out;
  render(expr, 0, out);
  return out;
}

}  // namespace trigit
