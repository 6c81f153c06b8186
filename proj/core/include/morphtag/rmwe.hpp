#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "morphtag/affix.hpp"
#include "morphtag/corpus.hpp"

namespace morphtag {

/// Lexicon used by the reduplicated-multiword-expression detector: surface
/// forms with sense ids, plus a list of onomatopoeic word pairs.
///
/// File format, one record per line:
///   surface TAB sense_id[,sense_id...]
/// A line consisting of "#MIMIC" switches to the pair section:
///   word1 TAB word2
/// Other lines starting with '#' are comments.
class Dictionary {
 public:
  static Dictionary parse(std::string_view text);
  static Dictionary from_file(const std::filesystem::path& path);

  void add_entry(std::string surface, std::set<std::string> senses);
  void add_onomatopoeic_pair(std::string first, std::string second);

  bool contains(const std::string& surface) const;
  /// Sense set for a surface, or nullptr when absent.
  const std::set<std::string>* senses(const std::string& surface) const;
  bool is_onomatopoeic_pair(const std::string& first,
                            const std::string& second) const;

  bool has_entries() const { return !entries_.empty(); }
  std::size_t entry_count() const { return entries_.size(); }
  std::size_t pair_count() const { return pairs_.size(); }

 private:
  std::map<std::string, std::set<std::string>> entries_;
  std::set<std::pair<std::string, std::string>> pairs_;
};

enum class RmweKind { Complete, Partial, Echo, Mimic, Double, Semantic };

const char* to_string(RmweKind kind);

/// Token span [start, end], inclusive on both sides. Repetition expressions
/// cover two tokens; the three-token form covers three.
struct RmweSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  RmweKind kind = RmweKind::Complete;

  std::size_t size() const { return end - start + 1; }
  bool operator==(const RmweSpan&) const = default;
};

/// Repetition pass: scans left to right, at each position testing in order
/// Double, Mimic, Complete, Echo, Partial; emits the first match and jumps
/// the cursor past it. Spans never overlap.
std::vector<RmweSpan> identify_rmwe(const Sentence& sentence,
                                    const AffixList& affixes,
                                    const Dictionary& dict);

/// Semantic pass: adjacent pairs of *distinct* surfaces whose dictionary
/// sense sets intersect. Same left-to-right greedy scan.
std::vector<RmweSpan> identify_semantic(const Sentence& sentence,
                                        const Dictionary& dict);

/// Repetition pass followed by the semantic pass restricted to tokens not
/// already covered; result sorted by start.
std::vector<RmweSpan> identify_all(const Sentence& sentence,
                                   const AffixList& affixes,
                                   const Dictionary& dict);

/// BIO encoding over the sentence: B-RMWE at each span start, I-RMWE inside,
/// O elsewhere. Throws OverlapError if spans overlap or run past the end.
std::vector<std::string> to_bio(const Sentence& sentence,
                                const std::vector<RmweSpan>& spans);

/// Recovers (start, end) pairs from a BIO label sequence. A stray I-RMWE
/// with no open span is treated as a span start.
std::vector<std::pair<std::size_t, std::size_t>> spans_from_bio(
    const std::vector<std::string>& labels);

/// Convenience: identify_all + to_bio for every sentence of a corpus.
std::vector<std::vector<std::string>> rmwe_bio_labels(const Corpus& corpus,
                                                      const AffixList& affixes,
                                                      const Dictionary& dict);

}  // namespace morphtag
