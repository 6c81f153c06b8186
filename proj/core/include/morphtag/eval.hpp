#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "morphtag/corpus.hpp"

namespace morphtag {

struct LabelScore {
  std::size_t correct = 0;
  std::size_t gold = 0;       // support
  std::size_t predicted = 0;
  double recall = 0.0;
  double precision = 0.0;
  double f_score = 0.0;
};

/// Token-level scores.
///   recall    = correct / gold answers
///   precision = correct / predicted answers
///   f_score   = (b^2 + 1) * P * R / (b^2 * P + R), with b = 1
/// `degenerate` flags any division by zero (the affected value is 0).
struct EvalReport {
  std::size_t correct = 0;
  std::size_t gold = 0;
  std::size_t predicted = 0;
  double recall = 0.0;
  double precision = 0.0;
  double f_score = 0.0;
  bool degenerate = false;
  std::map<std::string, LabelScore> per_label;
};

/// Compares last-column labels token by token. Corpora must align exactly
/// (same sentence count and lengths; throws AlignmentError otherwise).
/// `answer_labels`, when given, restricts which labels count as answers: a
/// token counts toward gold when its gold label is in the set and toward
/// predicted when its predicted label is. Without a filter every token is an
/// answer, so recall == precision == token accuracy.
EvalReport evaluate(const Corpus& gold, const Corpus& predicted,
                    const std::optional<std::set<std::string>>& answer_labels =
                        std::nullopt);

}  // namespace morphtag
