#pragma once

#include <string>

namespace trigit {

// Unified diff between two file bodies with 3 lines of context, GNU style:
// "--- aPath\n+++ bPath\n@@ ... @@" hunks, LF line endings, and the
// "\ No newline at end of file" marker where applicable. Returns the empty
// string when the inputs are identical.
std::string unifiedDiff(const std::string& oldText, const std::string& newText,
                        const std::string& aPath, const std::string& bPath,
                        int context = 3);

}  // namespace trigit
