#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "morphtag/corpus.hpp"
#include "morphtag/features.hpp"

// Linear-chain conditional random field:
//
//   P(Y | X) = exp( sum_t sum_k lambda_k f_k(y_{t-1}, y_t, X, t) ) / Z_X
//
// with binary indicator features produced by template expansion. Every
// expanded unigram string owns a block of |labels| weights (one per label);
// every bigram string owns a block of (|labels|+1) * |labels| weights (one
// per previous-label/label pair, where row 0 is the reserved BOS context
// used only at t = 0). All lattice computations run in log space.
namespace morphtag {

struct CrfModel {
  std::vector<std::string> labels;
  /// Expanded feature string -> offset of its weight block. Strings from
  /// unigram rules start with 'U', bigram strings with 'B'.
  std::unordered_map<std::string, std::int64_t> feature_index;
  std::vector<double> weights;
  std::string template_text;
  /// Column count of the training file (including the label column).
  std::size_t column_count = 0;

  std::size_t num_labels() const { return labels.size(); }
  /// Label id, or throws UnknownLabelError.
  int label_id(const std::string& label) const;
};

/// One sentence translated to weight-block offsets against a fixed model.
/// Feature strings that the model does not know are dropped (they contribute
/// nothing). `gold` holds label ids, or -1 where the sentence is unlabeled.
struct CompiledSentence {
  std::vector<std::vector<std::int64_t>> uni;  // [t] -> unigram block offsets
  std::vector<std::vector<std::int64_t>> bi;   // [t] -> bigram block offsets
  std::vector<int> gold;

  std::size_t size() const { return uni.size(); }
};

/// Expands the model's template over a sentence and resolves the strings.
/// Accepts sentences with model.column_count columns (label last, ignored
/// for expansion) or model.column_count - 1 columns (observations only).
CompiledSentence compile_sentence(const Sentence& sentence, const CrfModel& model);

/// Resolves pre-expanded feature vectors; `gold_labels` may be empty.
CompiledSentence compile_features(const std::vector<FeatureVector>& features,
                                  const std::vector<int>& gold_labels,
                                  const CrfModel& model);

/// Unnormalized log score of one label sequence.
double sequence_score(const CompiledSentence& x, std::span<const int> label_ids,
                      const CrfModel& model);

/// Forward/backward tables in log space. For every t,
/// logsumexp_y(alpha[t][y] + beta[t][y]) == log_z.
struct Lattice {
  std::vector<std::vector<double>> alpha;  // [T][L]
  std::vector<std::vector<double>> beta;   // [T][L]
  double log_z = 0.0;
};

Lattice forward_backward(const CompiledSentence& x, const CrfModel& model);

/// Best label sequence and its unnormalized log score. Score ties are broken
/// toward the lowest label index at every decision.
std::pair<std::vector<int>, double> viterbi_ids(const CompiledSentence& x,
                                                const CrfModel& model);

/// Convenience overload returning label strings; accepts sentences as
/// described at compile_sentence.
std::pair<std::vector<std::string>, double> viterbi(const Sentence& sentence,
                                                    const CrfModel& model);

enum class Optimizer { lbfgs, gradient_ascent };

struct TrainProgress {
  int iteration = 0;
  double objective = 0.0;      // penalized log-likelihood (maximized)
  double gradient_norm = 0.0;  // max-norm
};

struct TrainConfig {
  double sigma = 1.0;              // Gaussian prior scale; larger = weaker
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;
  std::size_t min_feature_count = 1;  // drop strings seen fewer times
  int threads = 0;                    // 0 = hardware concurrency
  Optimizer optimizer = Optimizer::lbfgs;
  /// When set, weights start at uniform[-0.5, 0.5] drawn from this seed
  /// instead of zero. The objective is concave, so any start converges to
  /// the same optimum; this exists to let callers verify that.
  std::optional<std::uint64_t> init_seed;
  std::function<void(const TrainProgress&)> progress;
};

/// Penalized conditional log-likelihood of a labeled corpus and its gradient
/// (both including the -|w|^2 / (2 sigma^2) prior term). The corpus must
/// have the model's column count; its last column supplies gold labels.
std::pair<double, std::vector<double>> log_likelihood_and_gradient(
    const Corpus& corpus, const CrfModel& model, const TrainConfig& config);

/// Trains a model from a labeled column file. Labels and feature strings are
/// indexed in first-seen order, which makes the whole procedure
/// deterministic for fixed inputs and flags (gradients are reduced in a
/// fixed order regardless of thread count).
CrfModel train(const Corpus& corpus, std::string_view template_text,
               const TrainConfig& config = {});

/// Appends one predicted-label column to every token. Input sentences may
/// carry the training column count (existing label column preserved) or one
/// column less.
Corpus tag_corpus(const Corpus& corpus, const CrfModel& model, int threads = 0);

/// Model files are a small self-describing text format ("morphtag-crf 1");
/// weights are stored as C99 hex floats so reload is bit-exact.
std::string save_model(const CrfModel& model);
void save_model(const CrfModel& model, const std::filesystem::path& path);

/// Throws VersionMismatchError for an unknown format revision and
/// CorruptModelError for anything truncated or malformed.
CrfModel load_model(std::string_view text);
CrfModel load_model_file(const std::filesystem::path& path);

}  // namespace morphtag
