#pragma once

// Shared helpers for the test binaries: deterministic random generators,
// brute-force reference implementations, and filesystem scratch space.

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "morphtag/affix.hpp"
#include "morphtag/corpus.hpp"
#include "morphtag/crf.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random lowercase-ASCII word, length in [min_len, max_len].
inline std::string random_word(Rng& rng, int min_len, int max_len) {
  const int len = uniform_int(rng, min_len, max_len);
  std::string word;
  for (int i = 0; i < len; ++i) {
    word.push_back(static_cast<char>('a' + uniform_int(rng, 0, 25)));
  }
  return word;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

// --- brute-force CRF references ----------------------------------------------
//
// These recompute lattice quantities by enumerating all |labels|^T label
// sequences with sequence_score, which exercises a completely different code
// path than the dynamic programs under test.

/// Calls fn(labels) for every sequence in lexicographic order.
template <typename Fn>
void for_each_sequence(std::size_t length, int num_labels, const Fn& fn) {
  std::vector<int> labels(length, 0);
  while (true) {
    fn(labels);
    std::size_t pos = length;
    while (pos > 0) {
      --pos;
      if (++labels[pos] < num_labels) break;
      labels[pos] = 0;
      if (pos == 0) return;
    }
    if (length == 0) return;
  }
}

/// log of sum over all sequences of exp(score).
inline double brute_force_log_z(const morphtag::CompiledSentence& x,
                                const morphtag::CrfModel& model) {
  const int L = static_cast<int>(model.num_labels());
  double max_score = -std::numeric_limits<double>::infinity();
  std::vector<double> scores;
  for_each_sequence(x.size(), L, [&](const std::vector<int>& y) {
    const double s = morphtag::sequence_score(x, y, model);
    scores.push_back(s);
    max_score = std::max(max_score, s);
  });
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - max_score);
  return max_score + std::log(sum);
}

/// Highest-scoring sequence; among exact ties, the lexicographically first.
inline std::pair<std::vector<int>, double> brute_force_viterbi(
    const morphtag::CompiledSentence& x, const morphtag::CrfModel& model) {
  const int L = static_cast<int>(model.num_labels());
  std::vector<int> best;
  double best_score = -std::numeric_limits<double>::infinity();
  for_each_sequence(x.size(), L, [&](const std::vector<int>& y) {
    const double s = morphtag::sequence_score(x, y, model);
    if (s > best_score) {
      best_score = s;
      best = y;
    }
  });
  return {best, best_score};
}

// --- single-strip stemming reference -------------------------------------------

/// Removes at most one affix: the first list entry matching at the word
/// boundary whose removal leaves a non-empty remainder. Iterating this to a
/// fixpoint must agree with the production strip loop.
inline bool single_strip(std::string& word, const std::vector<std::string>& list,
                         bool at_front, bool* guard) {
  for (const std::string& affix : list) {
    if (affix.empty()) continue;
    if (word.size() <= affix.size()) {
      if (guard && word == affix) *guard = true;
      continue;
    }
    const std::string_view w(word);
    if (at_front ? w.starts_with(affix) : w.ends_with(affix)) {
      word = at_front ? word.substr(affix.size())
                      : word.substr(0, word.size() - affix.size());
      return true;
    }
  }
  return false;
}

inline std::pair<std::string, bool> strip_to_fixpoint(
    std::string word, const std::vector<std::string>& list, bool at_front) {
  bool guard = false;
  while (single_strip(word, list, at_front, &guard)) {
  }
  return {word, guard};
}

}  // namespace testsupport
