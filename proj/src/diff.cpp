#include "trigit/diff.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace trigit {

namespace {

struct LineView {
  std::vector<std::string> lines;
  bool endsWithNewline = true;
};

LineView splitLines(const std::string& text) {
  LineView v;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      v.lines.push_back(text.substr(start));
      v.endsWithNewline = false;
      return v;
    }
    v.lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  v.endsWithNewline = true;  // empty text counts as newline-terminated
  return v;
}

// Myers-free LCS via dynamic programming; inputs here are small source files.
std::vector<std::pair<int, int>> lcsPairs(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      dp[i][j] = a[i] == b[j] ? dp[i + 1][j + 1] + 1
                              : std::max(dp[i + 1][j], dp[i][j + 1]);
  std::vector<std::pair<int, int>> pairs;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
      ++i;
      ++j;
    } else if (dp[i + 1][j] >= dp[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  return pairs;
}

struct Op {
  char tag;  // ' ', '-', '+'
  int aIndex = -1;
  int bIndex = -1;
};

std::string hunkRange(int start, int count) {
  // 1-based start; ",count" omitted when count == 1; empty ranges anchor at
  // the line before the hunk.
  int shown = count == 0 ? start : start + 1;
  std::string out = std::to_string(shown);
  if (count != 1) out += "," + std::to_string(count);
  return out;
}

}  // namespace

std::string unifiedDiff(const std::string& oldText, const std::string& newText,
                        const std::string& aPath, const std::string& bPath,
                        int context) {
  if (oldText == newText) return "";

  LineView a = splitLines(oldText);
  LineView b = splitLines(newText);

  std::vector<Op> ops;
  // Guard against pathological sizes; the project's files are desk-scale.
  if (a.lines.size() * b.lines.size() <= 16u * 1024u * 1024u) {
    auto pairs = lcsPairs(a.lines, b.lines);
    std::size_t ai = 0, bi = 0;
    for (auto [pi, pj] : pairs) {
      while (ai < static_cast<std::size_t>(pi)) ops.push_back({'-', static_cast<int>(ai++), -1});
      while (bi < static_cast<std::size_t>(pj)) ops.push_back({'+', -1, static_cast<int>(bi++)});
      ops.push_back({' ', static_cast<int>(ai++), static_cast<int>(bi++)});
    }
    while (ai < a.lines.size()) ops.push_back({'-', static_cast<int>(ai++), -1});
    while (bi < b.lines.size()) ops.push_back({'+', -1, static_cast<int>(bi++)});
  } else {
    for (std::size_t i = 0; i < a.lines.size(); ++i) ops.push_back({'-', static_cast<int>(i), -1});
    for (std::size_t j = 0; j < b.lines.size(); ++j) ops.push_back({'+', -1, static_cast<int>(j)});
  }

  // Group changes into hunks, merging those whose context would overlap.
  struct Hunk {
    std::size_t firstOp, lastOp;  // inclusive op range
  };
  std::vector<Hunk> hunks;
  std::optional<std::size_t> lastChange;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].tag == ' ') continue;
    if (!hunks.empty() && lastChange &&
        i - *lastChange <= static_cast<std::size_t>(2 * context)) {
      hunks.back().lastOp = i;
    } else {
      hunks.push_back({i, i});
    }
    lastChange = i;
  }

  std::string out = "--- " + aPath + "\n+++ " + bPath + "\n";

  auto lineNoOfOp = [&](std::size_t opIdx, bool forOld) {
    // Number of old/new lines consumed strictly before this op.
    int count = 0;
    for (std::size_t i = 0; i < opIdx; ++i) {
      const Op& op = ops[i];
      if (forOld && (op.tag == ' ' || op.tag == '-')) ++count;
      if (!forOld && (op.tag == ' ' || op.tag == '+')) ++count;
    }
    return count;
  };

  bool aMarker = !a.endsWithNewline;
  bool bMarker = !b.endsWithNewline;

  for (const Hunk& h : hunks) {
    std::size_t begin = h.firstOp;
    std::size_t end = h.lastOp;
    int ctx = context;
    while (ctx > 0 && begin > 0 && ops[begin - 1].tag == ' ') {
      --begin;
      --ctx;
    }
    ctx = context;
    while (ctx > 0 && end + 1 < ops.size() && ops[end + 1].tag == ' ') {
      ++end;
      --ctx;
    }

    int oldStart = lineNoOfOp(begin, true);
    int newStart = lineNoOfOp(begin, false);
    int oldCount = 0, newCount = 0;
    for (std::size_t i = begin; i <= end; ++i) {
      if (ops[i].tag == ' ' || ops[i].tag == '-') ++oldCount;
      if (ops[i].tag == ' ' || ops[i].tag == '+') ++newCount;
    }

    out += "@@ -" + hunkRange(oldStart, oldCount) + " +" + hunkRange(newStart, newCount) +
           " @@\n";
    for (std::size_t i = begin; i <= end; ++i) {
      const Op& op = ops[i];
      const std::string& line = op.tag == '+' ? b.lines[op.bIndex] : a.lines[op.aIndex];
      out += op.tag;
      out += line;
      out += "\n";
      bool lastOfOld = op.aIndex == static_cast<int>(a.lines.size()) - 1;
      bool lastOfNew = op.bIndex == static_cast<int>(b.lines.size()) - 1;
      if (op.tag == ' ' && lastOfOld && lastOfNew && aMarker && bMarker)
        out += "\\ No newline at end of file\n";
      else if (op.tag == '-' && lastOfOld && aMarker)
        out += "\\ No newline at end of file\n";
      else if (op.tag == '+' && lastOfNew && bMarker)
        out += "\\ No newline at end of file\n";
    }
  }
  return out;
}

}  // namespace trigit
