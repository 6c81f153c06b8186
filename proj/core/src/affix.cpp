#include "morphtag/affix.hpp"

#include <unordered_set>

#include "morphtag/corpus.hpp"
#include "morphtag/errors.hpp"

namespace morphtag {

std::vector<std::string> load_affix_file(const std::filesystem::path& path,
                                         std::vector<std::string>* warnings) {
  const std::string text = read_text_file(path);
  std::vector<std::string> affixes;
  std::unordered_set<std::string> seen;

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = (eol == std::string::npos)
                           ? text.substr(pos)
                           : text.substr(pos, eol - pos);
    pos = (eol == std::string::npos) ? text.size() : eol + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.pop_back();
    }
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (!seen.insert(line).second) {
      if (warnings) {
        warnings->push_back("duplicate affix '" + line + "' in " +
                            path.string() + " (keeping first)");
      }
      continue;
    }
    affixes.push_back(std::move(line));
  }
  return affixes;
}

AffixList AffixList::from_files(const std::filesystem::path& prefix_path,
                                const std::filesystem::path& suffix_path,
                                std::vector<std::string>* warnings) {
  AffixList list;
  list.prefixes = load_affix_file(prefix_path, warnings);
  list.suffixes = load_affix_file(suffix_path, warnings);
  return list;
}

namespace {

// Shared engine for both directions. Scans the list front to back; on a
// match removes the affix and restarts the scan, so shorter list entries can
// apply again to the shrunken word. A match covering the whole word is
// refused (the stem must keep at least one codepoint); the scan then
// continues with the next list entry.
StripResult strip(std::string_view word, const std::vector<std::string>& list,
                  bool at_front) {
  StripResult result;
  std::string w(word);
  bool stripped = true;
  while (stripped) {
    stripped = false;
    for (const std::string& affix : list) {
      if (affix.empty()) continue;
      const bool matches =
          at_front ? std::string_view(w).starts_with(affix)
                   : std::string_view(w).ends_with(affix);
      if (!matches) continue;
      if (w.size() == affix.size()) {
        result.guard_fired = true;
        continue;
      }
      w = at_front ? w.substr(affix.size())
                   : w.substr(0, w.size() - affix.size());
      result.stripped.push_back(affix);
      stripped = true;
      break;
    }
  }
  result.remainder = std::move(w);
  return result;
}

}  // namespace

StripResult strip_prefixes(std::string_view word, const AffixList& affixes) {
  return strip(word, affixes.prefixes, /*at_front=*/true);
}

StripResult strip_suffixes(std::string_view word, const AffixList& affixes) {
  return strip(word, affixes.suffixes, /*at_front=*/false);
}

StemResult stem(std::string_view word, const AffixList& affixes,
                StripOrder order) {
  StemResult result;
  if (order == StripOrder::prefixes_first) {
    StripResult p = strip_prefixes(word, affixes);
    StripResult s = strip_suffixes(p.remainder, affixes);
    result.stem = std::move(s.remainder);
    result.stripped_prefixes = std::move(p.stripped);
    result.stripped_suffixes = std::move(s.stripped);
    result.guard_fired = p.guard_fired || s.guard_fired;
  } else {
    StripResult s = strip_suffixes(word, affixes);
    StripResult p = strip_prefixes(s.remainder, affixes);
    result.stem = std::move(p.remainder);
    result.stripped_prefixes = std::move(p.stripped);
    result.stripped_suffixes = std::move(s.stripped);
    result.guard_fired = p.guard_fired || s.guard_fired;
  }
  return result;
}

}  // namespace morphtag
