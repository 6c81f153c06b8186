#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "morphtag/affix.hpp"
#include "morphtag/corpus.hpp"
#include "morphtag/crf.hpp"
#include "morphtag/features.hpp"

namespace {

using morphtag::AffixList;
using morphtag::Corpus;
using morphtag::CrfModel;
using morphtag::Sentence;
using morphtag::Token;

std::string random_word(std::mt19937_64& rng, int min_len, int max_len) {
  std::uniform_int_distribution<int> len_dist(min_len, max_len);
  std::uniform_int_distribution<int> ch_dist(0, 25);
  std::string word;
  const int len = len_dist(rng);
  for (int i = 0; i < len; ++i) {
    word.push_back(static_cast<char>('a' + ch_dist(rng)));
  }
  return word;
}

AffixList bench_affixes() {
  AffixList lists;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 11; ++i) lists.prefixes.push_back(random_word(rng, 1, 3));
  for (int i = 0; i < 61; ++i) lists.suffixes.push_back(random_word(rng, 1, 3));
  return lists;
}

std::vector<std::string> bench_words(std::size_t n) {
  std::mt19937_64 rng(12);
  std::vector<std::string> words;
  words.reserve(n);
  for (std::size_t i = 0; i < n; ++i) words.push_back(random_word(rng, 3, 12));
  return words;
}

Corpus bench_corpus(std::size_t sentences, int tokens_per_sentence, int labels) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> label_dist(0, labels - 1);
  Corpus corpus;
  corpus.column_count = 2;
  for (std::size_t s = 0; s < sentences; ++s) {
    Sentence sentence;
    for (int t = 0; t < tokens_per_sentence; ++t) {
      sentence.tokens.push_back(Token{
          {random_word(rng, 3, 10), "L" + std::to_string(label_dist(rng))}});
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

const char* kTemplate = "U00:%x[0,0]\nU01:%x[-1,0]\nU02:%x[1,0]\nB\n";

CrfModel bench_model(int labels) {
  morphtag::TrainConfig config;
  config.max_iterations = 5;
  config.threads = 1;
  return morphtag::train(bench_corpus(200, 12, labels), kTemplate, config);
}

void BM_stem(benchmark::State& state) {
  const AffixList affixes = bench_affixes();
  const auto words = bench_words(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(morphtag::stem(words[i++ & 1023], affixes));
  }
}
BENCHMARK(BM_stem);

void BM_expand_templates(benchmark::State& state) {
  const auto rules = morphtag::parse_template(kTemplate);
  Sentence sentence;
  std::mt19937_64 rng(14);
  for (int t = 0; t < 20; ++t) {
    sentence.tokens.push_back(Token{{random_word(rng, 3, 10), "L0"}});
  }
  for (auto _ : state) {
    for (std::size_t t = 0; t < sentence.size(); ++t) {
      benchmark::DoNotOptimize(morphtag::expand_templates(sentence, t, rules));
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(sentence.size()));
}
BENCHMARK(BM_expand_templates);

void BM_forward_backward(benchmark::State& state) {
  const int labels = static_cast<int>(state.range(0));
  const CrfModel model = bench_model(labels);
  std::mt19937_64 rng(15);
  Sentence sentence;
  for (int t = 0; t < 30; ++t) {
    sentence.tokens.push_back(Token{{random_word(rng, 3, 10)}});
  }
  const morphtag::CompiledSentence x = morphtag::compile_sentence(sentence, model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(morphtag::forward_backward(x, model));
  }
  state.SetItemsProcessed(state.iterations() * 30);
}
BENCHMARK(BM_forward_backward)->Arg(4)->Arg(16);

void BM_viterbi(benchmark::State& state) {
  const int labels = static_cast<int>(state.range(0));
  const CrfModel model = bench_model(labels);
  std::mt19937_64 rng(16);
  Sentence sentence;
  for (int t = 0; t < 30; ++t) {
    sentence.tokens.push_back(Token{{random_word(rng, 3, 10)}});
  }
  const morphtag::CompiledSentence x = morphtag::compile_sentence(sentence, model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(morphtag::viterbi_ids(x, model));
  }
  state.SetItemsProcessed(state.iterations() * 30);
}
BENCHMARK(BM_viterbi)->Arg(4)->Arg(16);

void BM_tag_corpus(benchmark::State& state) {
  const CrfModel model = bench_model(8);
  const Corpus corpus = bench_corpus(50, 15, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(morphtag::tag_corpus(corpus, model, 1));
  }
  state.SetItemsProcessed(state.iterations() * 50 * 15);
}
BENCHMARK(BM_tag_corpus);

}  // namespace

BENCHMARK_MAIN();
