#pragma once

#include <cstddef>
#include <string>

namespace trigit {

// Source region. Lines and columns are 1-based; end is exclusive in both the
// column and byte-offset sense. begin/end are byte offsets into the file.
struct Span {
  int line = 1;
  int column = 1;
  int endLine = 1;
  int endColumn = 1;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool contains(const Span& inner) const {
    return begin <= inner.begin && inner.end <= end;
  }
  bool zeroWidth() const { return begin == end; }
};

inline bool operator==(const Span& a, const Span& b) {
  return a.begin == b.begin && a.end == b.end && a.line == b.line &&
         a.column == b.column && a.endLine == b.endLine && a.endColumn == b.endColumn;
}

std::string describe(const Span& s);

}  // namespace trigit
