#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace trigit {

struct CommentSplit {
  std::string triggerText;
  std::string actionText;
  int templateId = 0;  // 1..10, see splitTriggerAction
};

struct CommentRecord {
  std::string file;
  int line = 0;
  std::string rawText;         // comment as written, delimiters included
  std::string normalizedText;  // marker and metadata stripped, single-spaced
  std::vector<std::string> cueWordsFound;  // occurrences, in order
  std::optional<CommentSplit> split;
};

// One record per comment containing the (case-sensitive) "TODO" marker,
// ordered by (file, line). Works off the token streams, so unparseable-but-
// lexable files still contribute; files that fail to lex are skipped with a
// warning. Throws IoError only.
std::vector<CommentRecord> extractTodos(const std::filesystem::path& sourceRoot,
                                        std::vector<std::string>* warnings = nullptr);

// Strips comment syntax, the TODO marker, an optional "(author)" attribution
// and one following ':' or '-'; collapses whitespace runs. Idempotent.
std::string normalizeComment(const std::string& rawText);

inline const std::vector<std::string>& cueWords() {
  static const std::vector<std::string> words = {"if", "when", "once", "as", "then"};
  return words;
}

// Whole-word, case-insensitive cue occurrences in order of appearance.
std::vector<std::string> findCueWords(const std::string& normalizedText);

// Keeps records whose normalized text contains at least one cue word,
// populating cueWordsFound.
std::vector<CommentRecord> filterByCueWords(std::vector<CommentRecord> records);

// Tries the ten frozen templates in priority order; first match wins.
//   1. if <T>, then <A>     2. if <T>, <A>      3. if <T> then <A>
//   4. <A> if <T>           5. when <T>, <A>    6. <A> when <T>
//   7. once <T>, <A>        8. <A> once <T>     9. <A> as soon as <T>
//  10. <T>, then <A>
std::optional<CommentSplit> splitTriggerAction(const std::string& normalizedText);

// Full mining pipeline used by the CLI: extract, normalize, filter (unless
// keepAll), split.
std::vector<CommentRecord> mineComments(const std::filesystem::path& sourceRoot,
                                        bool keepAll,
                                        std::vector<std::string>* warnings = nullptr);

// JSON Lines serialization: {"file","line","raw","text","cues":[...],
// "trigger","action","template"} with nulls when unsplit.
std::string toJsonLines(const std::vector<CommentRecord>& records);

}  // namespace trigit
