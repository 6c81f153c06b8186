#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "morphtag/affix.hpp"
#include "morphtag/corpus.hpp"

namespace morphtag {

/// Context window: `left` and `right` are non-negative offsets, so {2, 1}
/// means rows -2..+1 relative to the current token.
struct Window {
  int left = 0;
  int right = 0;
  bool operator==(const Window&) const = default;
};

/// Which observation columns get emitted/referenced. Window and slot fields
/// shape both the column layout and the generated template; the use_* flags
/// only select which always-present columns the template references.
///
/// Defaults reproduce the best-performing configuration:
///   W[-2,+1], SW[-1,+1], P[1], S[4], L, F, NS, NP, D, SF
struct FeatureConfig {
  Window word_window{2, 1};
  std::optional<Window> stem_window = Window{1, 1};
  int prefix_slots = 1;   // capped at 3
  int suffix_slots = 4;   // capped at 10
  bool use_length = true;
  int length_threshold = 3;  // L = 1 when codepoint length > threshold
  bool use_frequency = true;
  int frequency_threshold = 100;  // F = 1 when count >= threshold
  bool use_suffix_count = true;   // NS
  bool use_prefix_count = true;   // NP
  bool use_digit = true;          // D
  bool use_symbol = true;         // SF
  bool use_rmwe = false;

  bool operator==(const FeatureConfig&) const = default;
};

/// Round-trips configurations through the compact notation used in result
/// tables, e.g. "W[-2,+1], SW[-1,+1], P[1], S[4], L, F, NS, NP, D, SF".
/// Thresholds are not part of the notation and keep their defaults.
FeatureConfig parse_feature_config(std::string_view text);
std::string format_feature_config(const FeatureConfig& config);

/// Column indices of the files produced by annotate_columns. The fixed part
/// is surface, stem, NP, NS; then prefix/suffix slots; then the four
/// single-character classes; then the optional expression column; the gold
/// label, when present, is always last.
struct ColumnLayout {
  int surface = 0;
  int stem = 1;
  int np = 2;
  int ns = 3;
  int prefix_first = 4;
  int prefix_slots = 0;
  int suffix_first = 0;
  int suffix_slots = 0;
  int length = 0;
  int frequency = 0;
  int digit = 0;
  int symbol = 0;
  int rmwe = -1;  // -1 when absent
  int observation_columns = 0;  // everything except the label
};

ColumnLayout column_layout(const FeatureConfig& config);

/// Surface-form counts gathered from a training corpus.
class FrequencyTable {
 public:
  void add(const std::string& surface, std::size_t n = 1);
  std::size_t count(const std::string& surface) const;
  std::size_t distinct() const { return counts_.size(); }

 private:
  std::unordered_map<std::string, std::size_t> counts_;
};

FrequencyTable build_frequency_table(const Corpus& corpus);

/// Expands every token of `corpus` into the fixed observation columns
/// described by column_layout(config):
///   surface, stem, NP, NS, prefix slots, suffix slots, L, F, D, SF
/// Unused affix slots are padded with "0"; flag columns hold "0"/"1".
/// `rmwe_labels` (shape [sentence][token]) adds one more column and must be
/// given exactly when config.use_rmwe is set. A gold label column (any input
/// with 2+ columns; the last one) is carried through as the final column.
/// The frequency table is read, never modified.
Corpus annotate_columns(const Corpus& corpus, const AffixList& affixes,
                        const FrequencyTable& frequencies,
                        const std::vector<std::vector<std::string>>* rmwe_labels,
                        const FeatureConfig& config);

// ---------------------------------------------------------------------------
// Feature templates.
//
// A template file drives feature expansion, one rule per line:
//   U<id>:%x[row,col][/%x[row,col]...]   unigram rule (fires with the label)
//   B                                    label-bigram rule
// Rows are relative to the current token; out-of-sentence rows read the
// boundary sentinels _B-1, _B-2, ... before the start and _B+1, _B+2, ...
// past the end. Lines starting with '#' and blank lines are skipped.
// ---------------------------------------------------------------------------

struct TemplateTerm {
  int row = 0;
  int col = 0;
  bool operator==(const TemplateTerm&) const = default;
};

struct TemplateRule {
  std::string id;                   // "U00", "B", ...
  std::vector<TemplateTerm> terms;  // empty for a bare B rule
  bool bigram = false;
  bool operator==(const TemplateRule&) const = default;
};

/// Throws TemplateParseError (with 1-based line number) on malformed rules.
std::vector<TemplateRule> parse_template(std::string_view text);

/// Largest column index any rule reads, or -1 for an empty rule set.
int max_template_column(const std::vector<TemplateRule>& rules);

/// Features produced at one position: expanded strings, sorted and unique.
/// Unigram strings fire together with the label at the position, bigram
/// strings with the (previous label, label) pair.
struct FeatureVector {
  std::vector<std::string> unigram;
  std::vector<std::string> bigram;
  bool operator==(const FeatureVector&) const = default;
};

/// Expands all rules at `position`. Every produced string starts with the
/// rule id, so rules with distinct ids can never collide.
FeatureVector expand_templates(const Sentence& sentence, std::size_t position,
                               const std::vector<TemplateRule>& rules);

/// The template matching annotate_columns(config) output: one unigram rule
/// per selected column/row plus a label-bigram rule.
std::string default_best_template(const FeatureConfig& config);

}  // namespace morphtag
