// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// exit code is the number of failures. Unlike the unit tests these favor
// independent re-derivations (exhaustive enumeration, finite differences)
// over worked examples, so they double as a numerical audit of the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "morphtag/affix.hpp"
#include "morphtag/corpus.hpp"
#include "morphtag/crf.hpp"
#include "morphtag/eval.hpp"
#include "morphtag/features.hpp"
#include "morphtag/rmwe.hpp"
#include "support.hpp"

using namespace morphtag;

namespace {

int failures = 0;

void run_check(const char* name, const std::function<std::string()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string problem;
  try {
    problem = body();
  } catch (const std::exception& e) {
    problem = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (problem.empty()) {
    std::printf("PASS  %-58s (%.2fs)\n", name, seconds);
  } else {
    ++failures;
    std::printf("FAIL  %-58s (%.2fs)\n      %s\n", name, seconds,
                problem.c_str());
  }
  std::fflush(stdout);
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

// --- tiny model factory ------------------------------------------------------

Corpus labeled_corpus(
    const std::vector<std::vector<std::pair<std::string, std::string>>>& data) {
  Corpus corpus;
  corpus.column_count = 2;
  for (const auto& rows : data) {
    Sentence s;
    for (const auto& [word, label] : rows) {
      s.tokens.push_back(Token{{word, label}});
    }
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

Sentence words(const std::vector<std::string>& surfaces) {
  Sentence s;
  for (const std::string& w : surfaces) s.tokens.push_back(Token{{w}});
  return s;
}

constexpr const char* kContextTemplate = "U00:%x[0,0]\nU01:%x[-1,0]\nB\n";

/// Zero-weight model with `num_labels` labels and a `vocab`-word vocabulary
/// fully registered (zero optimizer iterations keep the start point).
CrfModel vocab_model(int num_labels, int vocab) {
  std::vector<std::vector<std::pair<std::string, std::string>>> rows(1);
  for (int i = 0; i < std::max(num_labels, vocab); ++i) {
    rows[0].push_back({"w" + std::to_string(i % vocab),
                       "L" + std::to_string(i % num_labels)});
  }
  TrainConfig config;
  config.max_iterations = 0;
  return train(labeled_corpus(rows), kContextTemplate, config);
}

void randomize_weights(CrfModel& model, testsupport::Rng& rng, double scale) {
  for (double& w : model.weights) {
    w = testsupport::uniform_real(rng, -scale, scale);
  }
}

Sentence random_vocab_sentence(testsupport::Rng& rng, int vocab, int min_len,
                               int max_len) {
  std::vector<std::string> surfaces;
  const int len = testsupport::uniform_int(rng, min_len, max_len);
  for (int t = 0; t < len; ++t) {
    surfaces.push_back(
        "w" + std::to_string(testsupport::uniform_int(rng, 0, vocab - 1)));
  }
  return words(surfaces);
}

// --- individual checks -------------------------------------------------------

std::string check_normalizer() {
  testsupport::Rng rng(1001);
  for (int trial = 0; trial < 200; ++trial) {
    const int L = testsupport::uniform_int(rng, 2, 4);
    CrfModel model = vocab_model(L, 5);
    randomize_weights(model, rng, 1.0);
    const Sentence sentence = random_vocab_sentence(rng, 5, 1, 6);
    const CompiledSentence x = compile_sentence(sentence, model);

    const double expected = testsupport::brute_force_log_z(x, model);
    const Lattice lattice = forward_backward(x, model);
    const double error =
        std::fabs(lattice.log_z - expected) / std::max(1.0, std::fabs(expected));
    if (!(error <= 1e-9)) {
      return "trial " + std::to_string(trial) + ": log Z " +
             format_double(lattice.log_z) + " vs enumerated " +
             format_double(expected) + " (rel err " + format_double(error) + ")";
    }
    // The alpha/beta tables must re-derive the same normalizer everywhere.
    for (std::size_t t = 0; t < x.size(); ++t) {
      double best = -1e300;
      for (int y = 0; y < L; ++y) {
        best = std::max(best, lattice.alpha[t][static_cast<std::size_t>(y)] +
                                  lattice.beta[t][static_cast<std::size_t>(y)]);
      }
      double sum = 0.0;
      for (int y = 0; y < L; ++y) {
        sum += std::exp(lattice.alpha[t][static_cast<std::size_t>(y)] +
                        lattice.beta[t][static_cast<std::size_t>(y)] - best);
      }
      const double log_z_t = best + std::log(sum);
      if (std::fabs(log_z_t - lattice.log_z) >
          1e-9 * std::max(1.0, std::fabs(lattice.log_z))) {
        return "trial " + std::to_string(trial) + ": alpha/beta at t=" +
               std::to_string(t) + " give " + format_double(log_z_t) +
               " instead of " + format_double(lattice.log_z);
      }
    }
  }
  return {};
}

std::string check_gradient() {
  // A ~20-parameter problem: 2 labels, 3 words, current + previous word.
  const Corpus corpus = labeled_corpus({{{"a", "X"}, {"b", "Y"}, {"c", "Y"}},
                                        {{"b", "X"}},
                                        {{"c", "X"}, {"a", "Y"}}});
  TrainConfig zero;
  zero.max_iterations = 0;
  CrfModel model = train(corpus, kContextTemplate, zero);

  const TrainConfig config;  // sigma = 1 prior included in both sides
  testsupport::Rng rng(2002);
  const double h = 1e-5;
  for (int point = 0; point < 10; ++point) {
    randomize_weights(model, rng, 0.5);
    const auto [value, gradient] =
        log_likelihood_and_gradient(corpus, model, config);
    if (!std::isfinite(value)) return "objective is not finite";
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
      CrfModel bumped = model;
      bumped.weights[i] += h;
      const double up = log_likelihood_and_gradient(corpus, bumped, config).first;
      bumped.weights[i] = model.weights[i] - h;
      const double down =
          log_likelihood_and_gradient(corpus, bumped, config).first;
      const double fd = (up - down) / (2.0 * h);
      if (!(std::fabs(gradient[i] - fd) <= 1e-5)) {
        return "point " + std::to_string(point) + ", weight " +
               std::to_string(i) + ": analytic " + format_double(gradient[i]) +
               " vs finite difference " + format_double(fd);
      }
    }
  }
  return {};
}

std::string check_viterbi() {
  testsupport::Rng rng(3003);
  for (int trial = 0; trial < 100; ++trial) {
    const int L = testsupport::uniform_int(rng, 2, 5);
    // Keep the enumeration below 1e5 sequences.
    int max_len = 1;
    while (std::pow(L, max_len + 1) <= 1e5) ++max_len;
    CrfModel model = vocab_model(L, 5);
    randomize_weights(model, rng, 1.0);
    const Sentence sentence = random_vocab_sentence(
        rng, 5, 1, std::min(max_len, 7));
    const CompiledSentence x = compile_sentence(sentence, model);

    const auto [brute_path, brute_score] =
        testsupport::brute_force_viterbi(x, model);
    const auto [path, score] = viterbi_ids(x, model);
    const double tolerance = 1e-12 * std::max(1.0, std::fabs(brute_score));
    if (std::fabs(score - brute_score) > tolerance) {
      return "trial " + std::to_string(trial) + ": reported score " +
             format_double(score) + " vs enumerated optimum " +
             format_double(brute_score);
    }
    const double achieved = sequence_score(x, path, model);
    if (std::fabs(achieved - brute_score) > tolerance) {
      return "trial " + std::to_string(trial) +
             ": decoded path scores " + format_double(achieved) +
             ", the optimum is " + format_double(brute_score);
    }
  }
  return {};
}

std::string check_optimum_unique() {
  const Corpus corpus = labeled_corpus({{{"a", "X"}, {"b", "Y"}, {"c", "X"}},
                                        {{"c", "Y"}, {"a", "X"}},
                                        {{"b", "Y"}, {"b", "X"}}});
  TrainConfig config;
  config.gradient_tolerance = 1e-7;
  config.max_iterations = 500;
  config.init_seed = 1;
  const CrfModel first = train(corpus, kContextTemplate, config);
  config.init_seed = 2;
  const CrfModel second = train(corpus, kContextTemplate, config);

  const TrainConfig plain;
  const double f1 = log_likelihood_and_gradient(corpus, first, plain).first;
  const double f2 = log_likelihood_and_gradient(corpus, second, plain).first;
  if (!(std::fabs(f1 - f2) <= 1e-6)) {
    return "objectives disagree: " + format_double(f1) + " vs " +
           format_double(f2);
  }
  return {};
}

std::string check_stemmer() {
  testsupport::Rng rng(4004);
  AffixList lists;
  for (int i = 0; i < 10; ++i) {
    lists.prefixes.push_back(testsupport::random_word(rng, 1, 3));
  }
  for (int i = 0; i < 20; ++i) {
    lists.suffixes.push_back(testsupport::random_word(rng, 1, 3));
  }
  for (int trial = 0; trial < 10000; ++trial) {
    const std::string word = testsupport::random_word(rng, 1, 14);
    const StemResult r = stem(word, lists);

    std::string rebuilt;
    for (const std::string& p : r.stripped_prefixes) rebuilt += p;
    rebuilt += r.stem;
    for (auto it = r.stripped_suffixes.rbegin(); it != r.stripped_suffixes.rend();
         ++it) {
      rebuilt += *it;
    }
    if (rebuilt != word) {
      return "'" + word + "' rebuilt as '" + rebuilt + "'";
    }
    if (r.stem.empty()) return "'" + word + "' stemmed to nothing";

    if (!r.guard_fired) {
      const StemResult again = stem(r.stem, lists);
      if (again.stem != r.stem || again.prefix_count() != 0 ||
          again.suffix_count() != 0) {
        return "'" + word + "': stem '" + r.stem + "' is not a fixpoint";
      }
    }
  }
  return {};
}

std::string check_reduplication() {
  AffixList affixes;
  affixes.prefixes = {"ই", "চ"};
  affixes.suffixes = {"দা", "সি"};
  const Dictionary dict = Dictionary::parse(
      "মরিক\t1\nযুম\t2\nথকসি\t3\nচথোক\t4\nচসিন\t5\nইমুন\t6\n"
      "পামবা\ttiger\nকে\ttiger\n");

  struct Case {
    std::vector<std::string> tokens;
    RmweSpan expected;
    bool semantic = false;
  };
  const std::vector<Case> cases = {
      {{"মরিক", "মরিক"}, {0, 1, RmweKind::Complete}},
      {{"যুম", "যুমদা"}, {0, 1, RmweKind::Complete}},
      {{"চথোক", "চসিন"}, {0, 1, RmweKind::Partial}},
      {{"থকসি", "খাসি"}, {0, 1, RmweKind::Echo}},
      {{"ইমুন", "ইমুন", "মুনবা"}, {0, 2, RmweKind::Double}},
      {{"পামবা", "কে"}, {0, 1, RmweKind::Semantic}, true},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    Sentence s;
    for (const std::string& w : cases[i].tokens) s.tokens.push_back(Token{{w}});
    const std::vector<RmweSpan> spans =
        cases[i].semantic ? identify_semantic(s, dict)
                          : identify_rmwe(s, affixes, dict);
    if (spans.size() != 1 || !(spans[0] == cases[i].expected)) {
      std::ostringstream msg;
      msg << "example " << (i + 1) << ": expected one "
          << to_string(cases[i].expected.kind) << " span [" << cases[i].expected.start
          << "," << cases[i].expected.end << "], got " << spans.size()
          << " span(s)";
      if (!spans.empty()) {
        msg << ", first " << to_string(spans[0].kind) << " [" << spans[0].start
            << "," << spans[0].end << "]";
      }
      return msg.str();
    }
  }
  return {};
}

std::string check_bio_round_trip() {
  testsupport::Rng rng(5005);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n =
        static_cast<std::size_t>(testsupport::uniform_int(rng, 1, 30));
    Sentence s;
    for (std::size_t i = 0; i < n; ++i) s.tokens.push_back(Token{{"w"}});
    std::vector<RmweSpan> spans;
    std::size_t pos = 0;
    while (pos + 1 < n) {
      if (testsupport::uniform_int(rng, 0, 2) == 0) {
        const std::size_t len =
            static_cast<std::size_t>(testsupport::uniform_int(rng, 2, 3));
        const std::size_t end = std::min(n - 1, pos + len - 1);
        spans.push_back(RmweSpan{pos, end, RmweKind::Complete});
        pos = end + 1;
      } else {
        ++pos;
      }
    }
    const std::vector<std::string> bio = to_bio(s, spans);
    for (std::size_t t = 0; t < bio.size(); ++t) {
      if (bio[t] == "I-RMWE" && (t == 0 || bio[t - 1] == "O")) {
        return "trial " + std::to_string(trial) + ": dangling I-RMWE at " +
               std::to_string(t);
      }
    }
    const auto decoded = spans_from_bio(bio);
    bool same = decoded.size() == spans.size();
    for (std::size_t k = 0; same && k < spans.size(); ++k) {
      same = decoded[k].first == spans[k].start &&
             decoded[k].second == spans[k].end;
    }
    if (!same) {
      return "trial " + std::to_string(trial) + ": decode(encode(spans)) " +
             "changed the spans";
    }
  }
  return {};
}

// Synthetic data where the label is a noisy function of the word's final
// syllable, so the achievable accuracy is ~90% and the affix-driven features
// are exactly what a learner needs to reach it.
struct Synthetic {
  Corpus train, test;
  std::vector<std::vector<std::string>> train_hint, test_hint;
  AffixList affixes;
};

Synthetic make_synthetic(testsupport::Rng& rng) {
  Synthetic data;
  data.affixes.suffixes = {"em", "ol", "ik"};
  const std::vector<std::string> labels = {"N", "V", "A"};

  const auto fill = [&](Corpus& corpus, std::vector<std::vector<std::string>>& hint,
                        std::size_t token_target) {
    corpus.column_count = 2;
    std::size_t tokens = 0;
    while (tokens < token_target) {
      Sentence s;
      std::vector<std::string> hints;
      const int len = testsupport::uniform_int(rng, 5, 12);
      for (int t = 0; t < len; ++t) {
        const int cls = testsupport::uniform_int(rng, 0, 2);
        const std::string word =
            testsupport::random_word(rng, 3, 5) + data.affixes.suffixes[
                static_cast<std::size_t>(cls)];
        std::string label = labels[static_cast<std::size_t>(cls)];
        if (testsupport::uniform_int(rng, 1, 10) == 1) {
          // 10% label noise: swap to one of the two other labels.
          label = labels[static_cast<std::size_t>(
              (cls + testsupport::uniform_int(rng, 1, 2)) % 3)];
        }
        // The optional hint column reveals the gold label half the time.
        hints.push_back(testsupport::uniform_int(rng, 0, 1) ? label : "O");
        s.tokens.push_back(Token{{word, label}});
        ++tokens;
      }
      corpus.sentences.push_back(std::move(s));
      hint.push_back(std::move(hints));
    }
  };
  fill(data.train, data.train_hint, 5000);
  fill(data.test, data.test_hint, 1000);
  return data;
}

double train_and_score(const Synthetic& data, bool with_hint) {
  FeatureConfig config;
  config.use_frequency = false;  // no stable frequency signal in random words
  config.use_rmwe = with_hint;   // the hint rides the optional extra column

  const FrequencyTable frequencies = build_frequency_table(data.train);
  const auto* train_hint = with_hint ? &data.train_hint : nullptr;
  const auto* test_hint = with_hint ? &data.test_hint : nullptr;
  const Corpus train_cols = annotate_columns(data.train, data.affixes,
                                             frequencies, train_hint, config);
  const Corpus test_cols = annotate_columns(data.test, data.affixes,
                                            frequencies, test_hint, config);

  TrainConfig tc;
  tc.max_iterations = 100;
  tc.gradient_tolerance = 1e-4;
  const CrfModel model = train(train_cols, default_best_template(config), tc);
  const Corpus tagged = tag_corpus(test_cols, model);
  return evaluate(test_cols, tagged).f_score;
}

std::string check_end_to_end() {
  testsupport::Rng rng(6006);
  const Synthetic data = make_synthetic(rng);
  const double plain = train_and_score(data, false);
  if (!(plain >= 0.85)) {
    return "held-out accuracy " + format_double(plain) + " is below 0.85";
  }
  const double hinted = train_and_score(data, true);
  if (!(hinted > plain)) {
    return "adding a predictive column did not help: " + format_double(hinted) +
           " vs " + format_double(plain);
  }
  return {};
}

std::string check_eval() {
  // Any corpus compared with itself scores exactly 1.
  testsupport::Rng rng(7007);
  Corpus corpus;
  corpus.column_count = 2;
  for (int s = 0; s < 5; ++s) {
    Sentence sentence;
    const int len = testsupport::uniform_int(rng, 1, 9);
    for (int t = 0; t < len; ++t) {
      sentence.tokens.push_back(
          Token{{"w", "L" + std::to_string(testsupport::uniform_int(rng, 0, 3))}});
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  const EvalReport self = evaluate(corpus, corpus);
  if (self.recall != 1.0 || self.precision != 1.0 || self.f_score != 1.0) {
    return "self-comparison is not exactly 1.0";
  }

  // Worked 4-token example: N V N V judged against N V V V.
  Corpus gold, pred;
  gold.column_count = pred.column_count = 2;
  Sentence gs, ps;
  for (const char* label : {"N", "V", "N", "V"}) gs.tokens.push_back(Token{{"w", label}});
  for (const char* label : {"N", "V", "V", "V"}) ps.tokens.push_back(Token{{"w", label}});
  gold.sentences.push_back(gs);
  pred.sentences.push_back(ps);
  const EvalReport report = evaluate(gold, pred);
  if (report.recall != 0.75 || report.precision != 0.75 ||
      report.f_score != 0.75) {
    return "expected exactly 0.75/0.75/0.75, got " +
           format_double(report.recall) + "/" + format_double(report.precision) +
           "/" + format_double(report.f_score);
  }
  return {};
}

std::string check_model_round_trip() {
  const Corpus corpus = labeled_corpus({{{"a", "X"}, {"b", "Y"}, {"c", "Z"}},
                                        {{"c", "X"}, {"a", "Z"}, {"b", "Y"}}});
  const CrfModel model = train(corpus, kContextTemplate);
  const CrfModel back = load_model(save_model(model));

  if (back.weights != model.weights) return "weights changed in the round trip";
  if (back.labels != model.labels) return "labels changed in the round trip";

  testsupport::Rng rng(8008);
  const std::vector<std::string> vocab = {"a", "b", "c", "zzz"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> surfaces;
    const int len = testsupport::uniform_int(rng, 1, 8);
    for (int t = 0; t < len; ++t) {
      surfaces.push_back(vocab[static_cast<std::size_t>(
          testsupport::uniform_int(rng, 0, 3))]);
    }
    const auto [p1, s1] = viterbi(words(surfaces), model);
    const auto [p2, s2] = viterbi(words(surfaces), back);
    if (p1 != p2) return "trial " + std::to_string(trial) + ": paths differ";
    if (s1 != s2) {
      return "trial " + std::to_string(trial) + ": scores differ (" +
             format_double(s1) + " vs " + format_double(s2) + ")";
    }
  }
  return {};
}

}  // namespace

int main() {
  run_check("forward-backward normalizer matches exhaustive enumeration",
            check_normalizer);
  run_check("analytic gradient matches central finite differences",
            check_gradient);
  run_check("viterbi decoding matches exhaustive argmax", check_viterbi);
  run_check("training optimum is independent of the starting point",
            check_optimum_unique);
  run_check("stemmer output reconstructs the word and is a fixpoint",
            check_stemmer);
  run_check("reduplicated-expression classifier handles the worked examples",
            check_reduplication);
  run_check("bio encoding and decoding invert each other", check_bio_round_trip);
  run_check("synthetic end-to-end tagging reaches the accuracy floor",
            check_end_to_end);
  run_check("evaluator is exact on self-comparison and the worked example",
            check_eval);
  run_check("model files reload to an identical decoder", check_model_round_trip);

  if (failures == 0) {
    std::printf("all checks passed\n");
  } else {
    std::printf("%d check(s) failed\n", failures);
  }
  return failures;
}
