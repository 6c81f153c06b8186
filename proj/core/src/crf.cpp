#include "morphtag/crf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "morphtag/detail/lbfgs.hpp"
#include "morphtag/errors.hpp"

namespace morphtag {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logsumexp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

int effective_threads(std::size_t n, int threads) {
  int t = threads > 0 ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (n > 0 && static_cast<std::size_t>(t) > n) t = static_cast<int>(n);
  return t;
}

// Runs fn(begin, end, slot) over contiguous chunks of [0, n). Slot order is
// fixed by chunk index, so reductions done slot-by-slot are deterministic
// for a given thread count.
template <typename Fn>
int run_chunks(std::size_t n, int threads, const Fn& fn) {
  const int t = effective_threads(n, threads);
  if (t <= 1) {
    fn(std::size_t{0}, n, 0);
    return 1;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  const std::size_t chunk = (n + t - 1) / t;
  for (int k = 0; k < t; ++k) {
    const std::size_t begin = std::min(n, k * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, begin, end, k] { fn(begin, end, k); });
  }
  for (auto& th : pool) th.join();
  return t;
}

// Per-position scores for one sentence under fixed weights.
//   state[t][y]                 unigram features at t firing with label y
//   trans[t][(prev + 1) * L + y] bigram features at t; prev == -1 is the
//                               reserved BOS context, used only at t == 0.
struct ScoreTable {
  std::vector<std::vector<double>> state;
  std::vector<std::vector<double>> trans;
  int labels = 0;

  double tr(std::size_t t, int prev, int y) const {
    return trans[t][static_cast<std::size_t>(prev + 1) * labels + y];
  }
};

ScoreTable score_sentence(const CompiledSentence& x,
                          const std::vector<double>& weights, int labels) {
  const std::size_t T = x.size();
  ScoreTable table;
  table.labels = labels;
  table.state.assign(T, std::vector<double>(labels, 0.0));
  table.trans.assign(T, std::vector<double>((labels + 1) * labels, 0.0));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::int64_t offset : x.uni[t]) {
      for (int y = 0; y < labels; ++y) {
        table.state[t][y] += weights[offset + y];
      }
    }
    for (std::int64_t offset : x.bi[t]) {
      auto& row = table.trans[t];
      for (std::size_t k = 0; k < row.size(); ++k) {
        row[k] += weights[offset + static_cast<std::int64_t>(k)];
      }
    }
  }
  return table;
}

Lattice forward_backward_scored(const ScoreTable& table) {
  const std::size_t T = table.state.size();
  const int L = table.labels;
  Lattice lattice;
  lattice.alpha.assign(T, std::vector<double>(L, kNegInf));
  lattice.beta.assign(T, std::vector<double>(L, 0.0));
  if (T == 0) {
    lattice.log_z = 0.0;
    return lattice;
  }

  std::vector<double> scratch(L);
  for (int y = 0; y < L; ++y) {
    lattice.alpha[0][y] = table.state[0][y] + table.tr(0, -1, y);
  }
  for (std::size_t t = 1; t < T; ++t) {
    for (int y = 0; y < L; ++y) {
      for (int prev = 0; prev < L; ++prev) {
        scratch[prev] = lattice.alpha[t - 1][prev] + table.tr(t, prev, y);
      }
      lattice.alpha[t][y] = table.state[t][y] + logsumexp(scratch);
    }
  }
  for (std::size_t t = T - 1; t-- > 0;) {
    for (int y = 0; y < L; ++y) {
      for (int next = 0; next < L; ++next) {
        scratch[next] = table.tr(t + 1, y, next) + table.state[t + 1][next] +
                        lattice.beta[t + 1][next];
      }
      lattice.beta[t][y] = logsumexp(scratch);
    }
  }
  lattice.log_z = logsumexp(lattice.alpha[T - 1]);
  return lattice;
}

double gold_score(const CompiledSentence& x, const ScoreTable& table) {
  double score = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const int y = x.gold[t];
    const int prev = t == 0 ? -1 : x.gold[t - 1];
    score += table.state[t][y] + table.tr(t, prev, y);
  }
  return score;
}

}  // namespace

int CrfModel::label_id(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  throw UnknownLabelError("unknown label '" + label + "'");
}

CompiledSentence compile_features(const std::vector<FeatureVector>& features,
                                  const std::vector<int>& gold_labels,
                                  const CrfModel& model) {
  CompiledSentence compiled;
  const std::size_t T = features.size();
  compiled.uni.resize(T);
  compiled.bi.resize(T);
  compiled.gold = gold_labels.empty() ? std::vector<int>(T, -1) : gold_labels;
  for (std::size_t t = 0; t < T; ++t) {
    for (const std::string& s : features[t].unigram) {
      auto it = model.feature_index.find(s);
      if (it != model.feature_index.end()) compiled.uni[t].push_back(it->second);
    }
    for (const std::string& s : features[t].bigram) {
      auto it = model.feature_index.find(s);
      if (it != model.feature_index.end()) compiled.bi[t].push_back(it->second);
    }
  }
  return compiled;
}

namespace {

// tag/viterbi accept sentences with or without the trailing label column.
Sentence observation_view(const Sentence& sentence, const CrfModel& model) {
  if (model.column_count == 0) return sentence;
  Sentence view = sentence;
  for (Token& token : view.tokens) {
    if (token.columns.size() == model.column_count) {
      token.columns.pop_back();
    } else if (token.columns.size() + 1 != model.column_count) {
      throw AlignmentError(
          "sentence has " + std::to_string(token.columns.size()) +
          " columns; model expects " + std::to_string(model.column_count) +
          " (or one less without the label)");
    }
  }
  return view;
}

}  // namespace

CompiledSentence compile_sentence(const Sentence& sentence, const CrfModel& model) {
  const Sentence view = observation_view(sentence, model);
  const std::vector<TemplateRule> rules = parse_template(model.template_text);
  std::vector<FeatureVector> features;
  features.reserve(view.size());
  for (std::size_t t = 0; t < view.size(); ++t) {
    features.push_back(expand_templates(view, t, rules));
  }
  // Keep gold ids when the label column is present; labels the model has
  // never seen map to -1 so decoding stays usable on arbitrary files.
  std::vector<int> gold;
  gold.reserve(sentence.size());
  for (const Token& token : sentence.tokens) {
    int id = -1;
    if (model.column_count != 0 && token.columns.size() == model.column_count) {
      const std::string& label = token.columns.back();
      for (std::size_t k = 0; k < model.labels.size(); ++k) {
        if (model.labels[k] == label) {
          id = static_cast<int>(k);
          break;
        }
      }
    }
    gold.push_back(id);
  }
  return compile_features(features, gold, model);
}

double sequence_score(const CompiledSentence& x, std::span<const int> label_ids,
                      const CrfModel& model) {
  if (label_ids.size() != x.size()) {
    throw AlignmentError("label sequence length does not match sentence");
  }
  const int L = static_cast<int>(model.num_labels());
  double score = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const int y = label_ids[t];
    if (y < 0 || y >= L) throw UnknownLabelError("label id out of range");
    for (std::int64_t offset : x.uni[t]) score += model.weights[offset + y];
    const int prev = t == 0 ? -1 : label_ids[t - 1];
    for (std::int64_t offset : x.bi[t]) {
      score += model.weights[offset + static_cast<std::int64_t>(prev + 1) * L + y];
    }
  }
  return score;
}

Lattice forward_backward(const CompiledSentence& x, const CrfModel& model) {
  return forward_backward_scored(
      score_sentence(x, model.weights, static_cast<int>(model.num_labels())));
}

std::pair<std::vector<int>, double> viterbi_ids(const CompiledSentence& x,
                                                const CrfModel& model) {
  const std::size_t T = x.size();
  const int L = static_cast<int>(model.num_labels());
  if (T == 0) return {{}, 0.0};
  const ScoreTable table = score_sentence(x, model.weights, L);

  std::vector<std::vector<double>> best(T, std::vector<double>(L, kNegInf));
  std::vector<std::vector<int>> back(T, std::vector<int>(L, 0));
  for (int y = 0; y < L; ++y) {
    best[0][y] = table.state[0][y] + table.tr(0, -1, y);
  }
  for (std::size_t t = 1; t < T; ++t) {
    for (int y = 0; y < L; ++y) {
      // Strict '>' keeps the lowest previous index on ties.
      double b = best[t - 1][0] + table.tr(t, 0, y);
      int arg = 0;
      for (int prev = 1; prev < L; ++prev) {
        const double candidate = best[t - 1][prev] + table.tr(t, prev, y);
        if (candidate > b) {
          b = candidate;
          arg = prev;
        }
      }
      best[t][y] = b + table.state[t][y];
      back[t][y] = arg;
    }
  }
  int last = 0;
  for (int y = 1; y < L; ++y) {
    if (best[T - 1][y] > best[T - 1][last]) last = y;
  }
  std::vector<int> path(T);
  path[T - 1] = last;
  for (std::size_t t = T - 1; t-- > 0;) {
    path[t] = back[t + 1][path[t + 1]];
  }
  return {std::move(path), best[T - 1][last]};
}

std::pair<std::vector<std::string>, double> viterbi(const Sentence& sentence,
                                                    const CrfModel& model) {
  auto [ids, score] = viterbi_ids(compile_sentence(sentence, model), model);
  std::vector<std::string> labels;
  labels.reserve(ids.size());
  for (int id : ids) labels.push_back(model.labels[static_cast<std::size_t>(id)]);
  return {std::move(labels), score};
}

// --- training ---------------------------------------------------------------

namespace {

struct CompiledCorpus {
  std::vector<CompiledSentence> sentences;
};

// Objective (maximized): sum_i [score(x_i, y_i) - log Z_i] - |w|^2/(2 sigma^2).
// The gradient is empirical counts - expected counts - w / sigma^2.
double objective_and_gradient(const CompiledCorpus& corpus,
                              const std::vector<double>& weights, int labels,
                              double sigma, int threads,
                              std::vector<double>& gradient) {
  const std::size_t n = corpus.sentences.size();
  const std::size_t dim = weights.size();
  const int used = effective_threads(n, threads);
  std::vector<std::vector<double>> grad_parts(used, std::vector<double>());
  std::vector<double> ll_parts(used, 0.0);

  run_chunks(n, used, [&](std::size_t begin, std::size_t end, int slot) {
    std::vector<double>& g = grad_parts[slot];
    g.assign(dim, 0.0);
    double ll = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const CompiledSentence& x = corpus.sentences[i];
      const std::size_t T = x.size();
      if (T == 0) continue;
      const ScoreTable table = score_sentence(x, weights, labels);
      const Lattice lattice = forward_backward_scored(table);
      ll += gold_score(x, table) - lattice.log_z;

      for (std::size_t t = 0; t < T; ++t) {
        // Empirical counts along the gold path.
        const int y = x.gold[t];
        const int prev = t == 0 ? -1 : x.gold[t - 1];
        for (std::int64_t offset : x.uni[t]) g[offset + y] += 1.0;
        for (std::int64_t offset : x.bi[t]) {
          g[offset + static_cast<std::int64_t>(prev + 1) * labels + y] += 1.0;
        }
        // Expected counts from the marginals.
        if (!x.uni[t].empty()) {
          for (int s = 0; s < labels; ++s) {
            const double m = std::exp(lattice.alpha[t][s] + lattice.beta[t][s] -
                                      lattice.log_z);
            for (std::int64_t offset : x.uni[t]) g[offset + s] -= m;
          }
        }
        if (!x.bi[t].empty()) {
          if (t == 0) {
            for (int s = 0; s < labels; ++s) {
              const double m = std::exp(lattice.alpha[0][s] + lattice.beta[0][s] -
                                        lattice.log_z);
              for (std::int64_t offset : x.bi[0]) g[offset + s] -= m;
            }
          } else {
            for (int a = 0; a < labels; ++a) {
              for (int b = 0; b < labels; ++b) {
                const double m =
                    std::exp(lattice.alpha[t - 1][a] + table.tr(t, a, b) +
                             table.state[t][b] + lattice.beta[t][b] -
                             lattice.log_z);
                const std::int64_t cell =
                    static_cast<std::int64_t>(a + 1) * labels + b;
                for (std::int64_t offset : x.bi[t]) g[offset + cell] -= m;
              }
            }
          }
        }
      }
    }
    ll_parts[slot] = ll;
  });

  double ll = 0.0;
  gradient.assign(dim, 0.0);
  for (int slot = 0; slot < used; ++slot) {
    ll += ll_parts[slot];
    if (!grad_parts[slot].empty()) {
      for (std::size_t j = 0; j < dim; ++j) gradient[j] += grad_parts[slot][j];
    }
  }
  const double inv_sigma2 = 1.0 / (sigma * sigma);
  for (std::size_t j = 0; j < dim; ++j) {
    ll -= weights[j] * weights[j] * 0.5 * inv_sigma2;
    gradient[j] -= weights[j] * inv_sigma2;
  }
  return ll;
}

std::vector<int> gold_ids(const Sentence& sentence,
                          const std::vector<std::string>& labels) {
  std::vector<int> ids;
  ids.reserve(sentence.size());
  for (const Token& token : sentence.tokens) {
    const std::string& gold = token.columns.back();
    int id = -1;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (labels[k] == gold) {
        id = static_cast<int>(k);
        break;
      }
    }
    if (id < 0) throw UnknownLabelError("unknown label '" + gold + "'");
    ids.push_back(id);
  }
  return ids;
}

}  // namespace

std::pair<double, std::vector<double>> log_likelihood_and_gradient(
    const Corpus& corpus, const CrfModel& model, const TrainConfig& config) {
  CompiledCorpus compiled;
  compiled.sentences.reserve(corpus.sentences.size());
  for (const Sentence& sentence : corpus.sentences) {
    CompiledSentence x = compile_sentence(sentence, model);
    x.gold = gold_ids(sentence, model.labels);
    compiled.sentences.push_back(std::move(x));
  }
  std::vector<double> gradient;
  const double ll = objective_and_gradient(
      compiled, model.weights, static_cast<int>(model.num_labels()),
      config.sigma, config.threads, gradient);
  return {ll, std::move(gradient)};
}

CrfModel train(const Corpus& corpus, std::string_view template_text,
               const TrainConfig& config) {
  if (corpus.token_count() == 0) {
    throw EmptyCorpusError("training corpus has no tokens");
  }
  if (corpus.column_count < 2) {
    throw Error("training corpus needs a label column (2+ columns)");
  }
  const std::vector<TemplateRule> rules = parse_template(template_text);
  if (rules.empty()) throw Error("template defines no rules");
  if (max_template_column(rules) >=
      static_cast<int>(corpus.column_count) - 1) {
    throw Error("template references column " +
                std::to_string(max_template_column(rules)) +
                " but only " + std::to_string(corpus.column_count - 1) +
                " observation columns exist");
  }

  CrfModel model;
  model.template_text = std::string(template_text);
  model.column_count = corpus.column_count;

  // Labels in first-seen order.
  for (const Sentence& sentence : corpus.sentences) {
    for (const Token& token : sentence.tokens) {
      const std::string& label = token.columns.back();
      if (std::find(model.labels.begin(), model.labels.end(), label) ==
          model.labels.end()) {
        model.labels.push_back(label);
      }
    }
  }
  const int L = static_cast<int>(model.labels.size());
  if (L < 2) {
    std::cerr << "warning: training corpus uses a single label; "
                 "the model can only ever predict it\n";
  }

  // Expand features once, count string occurrences.
  std::vector<std::vector<FeatureVector>> expanded;
  expanded.reserve(corpus.sentences.size());
  std::unordered_map<std::string, std::size_t> occurrences;
  for (const Sentence& sentence : corpus.sentences) {
    const Sentence view = observation_view(sentence, model);
    std::vector<FeatureVector> vectors;
    vectors.reserve(view.size());
    for (std::size_t t = 0; t < view.size(); ++t) {
      FeatureVector fv = expand_templates(view, t, rules);
      for (const std::string& s : fv.unigram) ++occurrences[s];
      for (const std::string& s : fv.bigram) ++occurrences[s];
      vectors.push_back(std::move(fv));
    }
    expanded.push_back(std::move(vectors));
  }

  // Index surviving strings in first-seen order; unigram strings own L
  // weights, bigram strings (L + 1) * L (the extra row is the BOS context).
  const std::size_t min_count = std::max<std::size_t>(config.min_feature_count, 1);
  std::int64_t next_offset = 0;
  const auto index_string = [&](const std::string& s, bool bigram) {
    if (model.feature_index.count(s)) return;
    if (occurrences[s] < min_count) return;
    model.feature_index.emplace(s, next_offset);
    next_offset += bigram ? static_cast<std::int64_t>(L + 1) * L : L;
  };
  for (const auto& vectors : expanded) {
    for (const FeatureVector& fv : vectors) {
      for (const std::string& s : fv.unigram) index_string(s, false);
      for (const std::string& s : fv.bigram) index_string(s, true);
    }
  }
  model.weights.assign(static_cast<std::size_t>(next_offset), 0.0);
  if (config.init_seed) {
    std::mt19937_64 rng(*config.init_seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (double& w : model.weights) w = u(rng);
  }

  CompiledCorpus compiled;
  compiled.sentences.reserve(corpus.sentences.size());
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    CompiledSentence x =
        compile_features(expanded[i], gold_ids(corpus.sentences[i], model.labels),
                         model);
    compiled.sentences.push_back(std::move(x));
  }
  expanded.clear();
  expanded.shrink_to_fit();

  // The optimizer minimizes, the likelihood is maximized: flip signs.
  detail::LbfgsObjective objective = [&](std::span<const double> x,
                                         std::span<double> grad) {
    std::vector<double> w(x.begin(), x.end());
    std::vector<double> g;
    const double ll = objective_and_gradient(compiled, w, L, config.sigma,
                                             config.threads, g);
    for (std::size_t j = 0; j < g.size(); ++j) grad[j] = -g[j];
    return -ll;
  };
  detail::LbfgsParams params;
  params.max_iterations = config.max_iterations;
  params.gradient_tolerance = config.gradient_tolerance;
  detail::LbfgsMonitor monitor;
  if (config.progress) {
    monitor = [&](int iter, double value, double gnorm) {
      config.progress(TrainProgress{iter, -value, gnorm});
    };
  }
  if (config.optimizer == Optimizer::lbfgs) {
    detail::lbfgs_minimize(model.weights, objective, params, monitor);
  } else {
    detail::gradient_descent_minimize(model.weights, objective, params, monitor);
  }
  return model;
}

Corpus tag_corpus(const Corpus& corpus, const CrfModel& model, int threads) {
  Corpus out = corpus;
  out.column_count = corpus.column_count + 1;
  const std::vector<TemplateRule> rules = parse_template(model.template_text);
  run_chunks(out.sentences.size(), threads,
             [&](std::size_t begin, std::size_t end, int) {
               for (std::size_t i = begin; i < end; ++i) {
                 Sentence& sentence = out.sentences[i];
                 const Sentence view = observation_view(sentence, model);
                 std::vector<FeatureVector> features;
                 features.reserve(view.size());
                 for (std::size_t t = 0; t < view.size(); ++t) {
                   features.push_back(expand_templates(view, t, rules));
                 }
                 const CompiledSentence x = compile_features(features, {}, model);
                 const auto [ids, score] = viterbi_ids(x, model);
                 for (std::size_t t = 0; t < sentence.size(); ++t) {
                   sentence.tokens[t].columns.push_back(
                       model.labels[static_cast<std::size_t>(ids[t])]);
                 }
               }
             });
  return out;
}

// --- serialization ----------------------------------------------------------

namespace {

constexpr std::string_view kMagic = "morphtag-crf";
constexpr int kVersion = 1;

std::string format_weight(double w) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%a", w);
  return buffer;
}

double parse_weight(const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty()) {
    throw CorruptModelError("bad weight '" + text + "'");
  }
  return value;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string next(const char* what) {
    if (pos_ > text_.size()) {
      throw CorruptModelError(std::string("truncated model file: missing ") +
                              what);
    }
    std::size_t eol = text_.find('\n', pos_);
    std::string line;
    if (eol == std::string_view::npos) {
      if (pos_ == text_.size()) {
        throw CorruptModelError(std::string("truncated model file: missing ") +
                                what);
      }
      line = std::string(text_.substr(pos_));
      pos_ = text_.size() + 1;
    } else {
      line = std::string(text_.substr(pos_, eol - pos_));
      pos_ = eol + 1;
    }
    return line;
  }

  std::string take(std::size_t bytes, const char* what) {
    if (pos_ + bytes > text_.size()) {
      throw CorruptModelError(std::string("truncated model file: missing ") +
                              what);
    }
    std::string chunk(text_.substr(pos_, bytes));
    pos_ += bytes;
    if (pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
    return chunk;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::size_t parse_count(const std::string& line, const char* what) {
  std::istringstream in(line);
  std::string key;
  long long value = -1;
  in >> key >> value;
  if (key != what || value < 0 || !in || !(in >> std::ws).eof()) {
    throw CorruptModelError(std::string("expected '") + what +
                            " <count>', got '" + line + "'");
  }
  return static_cast<std::size_t>(value);
}

}  // namespace

std::string save_model(const CrfModel& model) {
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << '\n';
  out << "columns " << model.column_count << '\n';
  out << "labels " << model.labels.size() << '\n';
  for (const std::string& label : model.labels) out << label << '\n';
  out << "template " << model.template_text.size() << '\n';
  out << model.template_text << '\n';
  // Features sorted by block offset so the file is deterministic.
  std::vector<std::pair<std::int64_t, const std::string*>> ordered;
  ordered.reserve(model.feature_index.size());
  for (const auto& [s, offset] : model.feature_index) {
    ordered.emplace_back(offset, &s);
  }
  std::sort(ordered.begin(), ordered.end());
  out << "features " << ordered.size() << '\n';
  for (const auto& [offset, s] : ordered) out << *s << ' ' << offset << '\n';
  out << "weights " << model.weights.size() << '\n';
  for (double w : model.weights) out << format_weight(w) << '\n';
  out << "end\n";
  return out.str();
}

void save_model(const CrfModel& model, const std::filesystem::path& path) {
  write_text_file_atomic(path, save_model(model));
}

CrfModel load_model(std::string_view text) {
  LineReader reader(text);
  {
    std::istringstream header(reader.next("header"));
    std::string magic;
    int version = -1;
    header >> magic >> version;
    if (magic != kMagic || !header) {
      throw CorruptModelError("not a model file (bad magic line)");
    }
    if (version != kVersion) {
      throw VersionMismatchError("model format revision " +
                                 std::to_string(version) + " is not supported");
    }
  }
  CrfModel model;
  model.column_count = parse_count(reader.next("columns"), "columns");
  const std::size_t num_labels = parse_count(reader.next("labels"), "labels");
  for (std::size_t i = 0; i < num_labels; ++i) {
    std::string label = reader.next("label");
    if (label.empty()) throw CorruptModelError("empty label");
    model.labels.push_back(std::move(label));
  }
  const std::size_t template_bytes =
      parse_count(reader.next("template"), "template");
  model.template_text = reader.take(template_bytes, "template body");

  const std::size_t num_features =
      parse_count(reader.next("features"), "features");
  std::vector<std::pair<std::string, std::int64_t>> entries;
  entries.reserve(num_features);
  for (std::size_t i = 0; i < num_features; ++i) {
    std::istringstream in(reader.next("feature"));
    std::string s;
    std::int64_t offset = -1;
    in >> s >> offset;
    if (s.empty() || offset < 0 || !in) {
      throw CorruptModelError("bad feature line");
    }
    entries.emplace_back(std::move(s), offset);
  }
  const std::size_t num_weights = parse_count(reader.next("weights"), "weights");
  model.weights.reserve(num_weights);
  for (std::size_t i = 0; i < num_weights; ++i) {
    model.weights.push_back(parse_weight(reader.next("weight")));
  }
  if (reader.next("end marker") != "end") {
    throw CorruptModelError("missing end marker");
  }

  const std::int64_t L = static_cast<std::int64_t>(model.labels.size());
  for (auto& [s, offset] : entries) {
    const std::int64_t block = s.front() == 'B' ? (L + 1) * L : L;
    if (offset + block > static_cast<std::int64_t>(model.weights.size())) {
      throw CorruptModelError("feature block outside weight vector");
    }
    model.feature_index.emplace(std::move(s), offset);
  }
  return model;
}

CrfModel load_model_file(const std::filesystem::path& path) {
  return load_model(read_text_file(path));
}

}  // namespace morphtag
