#include "morphtag/eval.hpp"

#include <string>

#include "morphtag/errors.hpp"

namespace morphtag {

namespace {

// F_b with b = 1; 0 (flagged) when the denominator vanishes.
double f_measure(double precision, double recall, bool& degenerate) {
  const double beta2 = 1.0;
  const double denominator = beta2 * precision + recall;
  if (denominator == 0.0) {
    degenerate = true;
    return 0.0;
  }
  return (beta2 + 1.0) * precision * recall / denominator;
}

double ratio(std::size_t num, std::size_t den, bool& degenerate) {
  if (den == 0) {
    degenerate = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvalReport evaluate(const Corpus& gold, const Corpus& predicted,
                    const std::optional<std::set<std::string>>& answer_labels) {
  if (gold.sentences.size() != predicted.sentences.size()) {
    throw AlignmentError("sentence counts differ: " +
                         std::to_string(gold.sentences.size()) + " vs " +
                         std::to_string(predicted.sentences.size()));
  }

  const auto is_answer = [&](const std::string& label) {
    return !answer_labels || answer_labels->count(label) != 0;
  };

  EvalReport report;
  std::map<std::string, LabelScore> per_label;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const Sentence& gs = gold.sentences[s];
    const Sentence& ps = predicted.sentences[s];
    if (gs.size() != ps.size()) {
      throw AlignmentError("sentence " + std::to_string(s + 1) +
                           ": token counts differ (" +
                           std::to_string(gs.size()) + " vs " +
                           std::to_string(ps.size()) + ")");
    }
    for (std::size_t t = 0; t < gs.size(); ++t) {
      const std::string& g = gs.tokens[t].label();
      const std::string& p = ps.tokens[t].label();
      const bool g_answer = is_answer(g);
      const bool p_answer = is_answer(p);
      if (g_answer) {
        ++report.gold;
        ++per_label[g].gold;
      }
      if (p_answer) {
        ++report.predicted;
        ++per_label[p].predicted;
      }
      if (g == p && g_answer) {
        ++report.correct;
        ++per_label[g].correct;
      }
    }
  }

  report.recall = ratio(report.correct, report.gold, report.degenerate);
  report.precision = ratio(report.correct, report.predicted, report.degenerate);
  report.f_score = f_measure(report.precision, report.recall, report.degenerate);

  for (auto& [label, score] : per_label) {
    bool ignored = false;
    score.recall = ratio(score.correct, score.gold, ignored);
    score.precision = ratio(score.correct, score.predicted, ignored);
    score.f_score = f_measure(score.precision, score.recall, ignored);
  }
  report.per_label = std::move(per_label);
  return report;
}

}  // namespace morphtag
