#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace morphtag {

/// Ordered prefix and suffix inventories. Order matters: stripping always
/// scans the list front to back and takes the first match.
struct AffixList {
  std::vector<std::string> prefixes;
  std::vector<std::string> suffixes;

  /// Loads one affix per line (blank lines skipped). Duplicates are dropped,
  /// keeping the first occurrence; when `warnings` is given, one message per
  /// duplicate is appended.
  static AffixList from_files(const std::filesystem::path& prefix_path,
                              const std::filesystem::path& suffix_path,
                              std::vector<std::string>* warnings = nullptr);
};

std::vector<std::string> load_affix_file(const std::filesystem::path& path,
                                         std::vector<std::string>* warnings = nullptr);

/// Result of one stripping pass. `stripped` records affixes outermost-first,
/// i.e. in the order they were removed. `guard_fired` reports that some affix
/// matched the whole remaining word and was refused (a stem must keep at
/// least one codepoint).
struct StripResult {
  std::string remainder;
  std::vector<std::string> stripped;
  bool guard_fired = false;
};

/// Repeatedly removes the first matching list prefix from the front of the
/// word, restarting the scan from the top of the list after every removal,
/// until a full pass makes no change.
StripResult strip_prefixes(std::string_view word, const AffixList& affixes);

/// Same procedure at the end of the word.
StripResult strip_suffixes(std::string_view word, const AffixList& affixes);

enum class StripOrder { prefixes_first, suffixes_first };

struct StemResult {
  std::string stem;
  std::vector<std::string> stripped_prefixes;  // outermost (leftmost) first
  std::vector<std::string> stripped_suffixes;  // outermost (rightmost) first
  bool guard_fired = false;

  std::size_t prefix_count() const { return stripped_prefixes.size(); }
  std::size_t suffix_count() const { return stripped_suffixes.size(); }
};

/// Full stem: one exhaustive prefix pass and one exhaustive suffix pass, in
/// the given order. The original word is always recoverable as
///   join(stripped_prefixes) + stem + join(reverse(stripped_suffixes)).
StemResult stem(std::string_view word, const AffixList& affixes,
                StripOrder order = StripOrder::prefixes_first);

}  // namespace morphtag
