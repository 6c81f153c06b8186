#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "morphtag/affix.hpp"
#include "morphtag/corpus.hpp"
#include "morphtag/crf.hpp"
#include "morphtag/errors.hpp"
#include "morphtag/eval.hpp"
#include "morphtag/features.hpp"
#include "morphtag/rmwe.hpp"

namespace morphtag::cli {

namespace {

namespace fs = std::filesystem;

void require_file(const std::string& path, const char* what) {
  if (path.empty()) return;
  if (!fs::exists(path)) {
    throw IoError(std::string(what) + " file not found: " + path);
  }
}

AffixList load_affixes(const std::string& prefixes, const std::string& suffixes,
                       std::ostream& err) {
  std::vector<std::string> warnings;
  AffixList list = AffixList::from_files(prefixes, suffixes, &warnings);
  for (const std::string& w : warnings) err << "warning: " << w << '\n';
  return list;
}

// Writes to the output file (atomically) when given, else to the stream.
void emit(const std::string& content, const std::string& path,
          std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_text_file_atomic(path, content);
  }
}

std::string percent(double ratio) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f%%", 100.0 * ratio);
  return buffer;
}

void print_report(const EvalReport& report, std::ostream& out) {
  out << "recall:    " << percent(report.recall) << " (" << report.correct
      << "/" << report.gold << ")\n";
  out << "precision: " << percent(report.precision) << " (" << report.correct
      << "/" << report.predicted << ")\n";
  out << "f-score:   " << percent(report.f_score) << "\n";
  if (report.degenerate) {
    out << "note: a denominator was zero; the affected score is reported as 0\n";
  }
  if (!report.per_label.empty()) {
    out << "\nper label:\n";
    for (const auto& [label, score] : report.per_label) {
      out << "  " << label << "  recall " << percent(score.recall)
          << "  precision " << percent(score.precision) << "  f "
          << percent(score.f_score) << "  (gold " << score.gold << ", predicted "
          << score.predicted << ")\n";
    }
  }
}

// --- subcommand options ------------------------------------------------------

struct StemOptions {
  std::string prefixes, suffixes, input, output;
  std::string order = "ps";
};

struct RmweOptions {
  std::string dict, prefixes, suffixes, input, output;
};

struct ExtractOptions {
  std::string prefixes, suffixes, dict, input, output;
  std::string features;  // compact notation; empty = default configuration
  std::string freq_corpus;
  std::string write_template;
  bool rmwe = false;
  bool raw = false;
};

struct TrainOptions {
  std::string template_path, input, output;
  double sigma = 1.0;
  int max_iter = 200;
  double tolerance = 1e-5;
  std::size_t min_feature_count = 1;
  int threads = 0;
  std::string optimizer = "lbfgs";
  std::string log_format = "plain";
  std::optional<std::uint64_t> init_seed;
  bool quiet = false;
};

struct TagOptions {
  std::string model, input, output;
  int threads = 0;
};

struct EvalOptions {
  std::string gold, predicted;
  std::vector<std::string> exclude_labels;
};

struct SweepOptions {
  std::string configs, train, test, prefixes, suffixes, dict, output;
  double sigma = 1.0;
  int max_iter = 200;
  double tolerance = 1e-5;
  std::size_t min_feature_count = 1;
  int threads = 0;
};

// --- command bodies ----------------------------------------------------------

int run_stem(const StemOptions& opt, std::ostream& out, std::ostream& err) {
  require_file(opt.prefixes, "prefix");
  require_file(opt.suffixes, "suffix");
  require_file(opt.input, "input");
  const AffixList affixes = load_affixes(opt.prefixes, opt.suffixes, err);
  const StripOrder order = opt.order == "sp" ? StripOrder::suffixes_first
                                             : StripOrder::prefixes_first;
  std::istringstream in(read_text_file(opt.input));
  std::ostringstream result;
  std::string word;
  while (in >> word) {
    const StemResult stemmed = stem(word, affixes, order);
    result << word << '\t' << stemmed.stem << '\t' << stemmed.prefix_count()
           << '\t' << stemmed.suffix_count() << '\n';
  }
  emit(result.str(), opt.output, out);
  return 0;
}

int run_rmwe(const RmweOptions& opt, std::ostream& out, std::ostream& err) {
  require_file(opt.dict, "dictionary");
  require_file(opt.prefixes, "prefix");
  require_file(opt.suffixes, "suffix");
  require_file(opt.input, "input");
  const AffixList affixes = load_affixes(opt.prefixes, opt.suffixes, err);
  const Dictionary dict = Dictionary::from_file(opt.dict);
  Corpus corpus = read_column_file(opt.input);
  const auto labels = rmwe_bio_labels(corpus, affixes, dict);
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    for (std::size_t t = 0; t < corpus.sentences[s].size(); ++t) {
      corpus.sentences[s].tokens[t].columns.push_back(labels[s][t]);
    }
  }
  corpus.column_count += 1;
  emit(write_column_file(corpus), opt.output, out);
  return 0;
}

int run_extract(const ExtractOptions& opt, std::ostream& out, std::ostream& err) {
  require_file(opt.prefixes, "prefix");
  require_file(opt.suffixes, "suffix");
  require_file(opt.input, "input");
  if (!opt.freq_corpus.empty()) require_file(opt.freq_corpus, "frequency corpus");

  FeatureConfig config =
      opt.features.empty() ? FeatureConfig{} : parse_feature_config(opt.features);
  if (opt.rmwe) config.use_rmwe = true;
  if (config.use_rmwe && opt.dict.empty()) {
    throw Error("--rmwe needs --dict");
  }
  if (!opt.dict.empty()) require_file(opt.dict, "dictionary");

  const AffixList affixes = load_affixes(opt.prefixes, opt.suffixes, err);
  Corpus corpus;
  if (opt.raw) {
    Corpus raw;
    raw.sentences = tokenize(read_text_file(opt.input));
    raw.column_count = raw.sentences.empty() ? 0 : 1;
    corpus = std::move(raw);
  } else {
    corpus = read_column_file(opt.input);
  }

  const FrequencyTable frequencies =
      opt.freq_corpus.empty() ? build_frequency_table(corpus)
                              : build_frequency_table(read_column_file(opt.freq_corpus));

  std::vector<std::vector<std::string>> rmwe_labels_storage;
  const std::vector<std::vector<std::string>>* rmwe_labels = nullptr;
  if (config.use_rmwe) {
    const Dictionary dict = Dictionary::from_file(opt.dict);
    rmwe_labels_storage = rmwe_bio_labels(corpus, affixes, dict);
    rmwe_labels = &rmwe_labels_storage;
  }

  const Corpus annotated =
      annotate_columns(corpus, affixes, frequencies, rmwe_labels, config);
  if (!opt.write_template.empty()) {
    write_text_file_atomic(opt.write_template, default_best_template(config));
  }
  emit(write_column_file(annotated), opt.output, out);
  return 0;
}

int run_train(const TrainOptions& opt, std::ostream& out, std::ostream& err) {
  (void)out;
  require_file(opt.template_path, "template");
  require_file(opt.input, "training");
  if (opt.output.empty()) throw Error("train needs -o <model>");

  TrainConfig config;
  config.sigma = opt.sigma;
  config.max_iterations = opt.max_iter;
  config.gradient_tolerance = opt.tolerance;
  config.min_feature_count = opt.min_feature_count;
  config.threads = opt.threads;
  config.optimizer =
      opt.optimizer == "gd" ? Optimizer::gradient_ascent : Optimizer::lbfgs;
  config.init_seed = opt.init_seed;
  if (!opt.quiet) {
    const bool tsv = opt.log_format == "tsv";
    config.progress = [&err, tsv](const TrainProgress& p) {
      if (tsv) {
        err << p.iteration << '\t' << p.objective << '\t' << p.gradient_norm
            << '\n';
      } else {
        char line[128];
        std::snprintf(line, sizeof(line), "iter %4d  obj %.6f  |g| %.6g",
                      p.iteration, p.objective, p.gradient_norm);
        err << line << '\n';
      }
    };
  }

  const Corpus corpus = read_column_file(opt.input);
  const std::string template_text = read_text_file(opt.template_path);
  const CrfModel model = train(corpus, template_text, config);
  save_model(model, opt.output);
  if (!opt.quiet) {
    err << "model: " << model.labels.size() << " labels, "
        << model.feature_index.size() << " feature strings, "
        << model.weights.size() << " weights -> " << opt.output << '\n';
  }
  return 0;
}

int run_tag(const TagOptions& opt, std::ostream& out, std::ostream& err) {
  (void)err;
  require_file(opt.model, "model");
  require_file(opt.input, "input");
  const CrfModel model = load_model_file(opt.model);
  const Corpus corpus = read_column_file(opt.input);
  const Corpus tagged = tag_corpus(corpus, model, opt.threads);
  emit(write_column_file(tagged), opt.output, out);
  return 0;
}

int run_eval(const EvalOptions& opt, std::ostream& out) {
  require_file(opt.gold, "gold");
  require_file(opt.predicted, "predicted");
  const Corpus gold = read_column_file(opt.gold);
  const Corpus predicted = read_column_file(opt.predicted);

  std::optional<std::set<std::string>> filter;
  if (!opt.exclude_labels.empty()) {
    std::set<std::string> excluded(opt.exclude_labels.begin(),
                                   opt.exclude_labels.end());
    std::set<std::string> keep;
    for (const Corpus* corpus : {&gold, &predicted}) {
      for (const Sentence& sentence : corpus->sentences) {
        for (const Token& token : sentence.tokens) {
          if (!excluded.count(token.label())) keep.insert(token.label());
        }
      }
    }
    filter = std::move(keep);
  }
  print_report(evaluate(gold, predicted, filter), out);
  return 0;
}

int run_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  require_file(opt.configs, "configs");
  require_file(opt.train, "training");
  require_file(opt.test, "test");
  require_file(opt.prefixes, "prefix");
  require_file(opt.suffixes, "suffix");
  if (!opt.dict.empty()) require_file(opt.dict, "dictionary");

  const AffixList affixes = load_affixes(opt.prefixes, opt.suffixes, err);
  const Corpus train_base = read_column_file(opt.train);
  const Corpus test_base = read_column_file(opt.test);
  if (train_base.column_count < 2 || test_base.column_count < 2) {
    throw Error("sweep inputs need gold labels in the last column");
  }
  const FrequencyTable frequencies = build_frequency_table(train_base);
  std::optional<Dictionary> dict;
  if (!opt.dict.empty()) dict = Dictionary::from_file(opt.dict);

  struct Row {
    std::string name;
    double recall = 0, precision = 0, f = 0;
    std::string error;
  };
  std::vector<Row> rows;

  std::istringstream configs(read_text_file(opt.configs));
  std::string line;
  while (std::getline(configs, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos || line[begin] == '#') continue;
    Row row;
    row.name = line.substr(begin);
    try {
      const FeatureConfig config = parse_feature_config(row.name);
      row.name = format_feature_config(config);
      if (config.use_rmwe && !dict) throw Error("configuration uses RMWE but no --dict given");

      std::vector<std::vector<std::string>> train_rmwe, test_rmwe;
      const std::vector<std::vector<std::string>>* train_ptr = nullptr;
      const std::vector<std::vector<std::string>>* test_ptr = nullptr;
      if (config.use_rmwe) {
        train_rmwe = rmwe_bio_labels(train_base, affixes, *dict);
        test_rmwe = rmwe_bio_labels(test_base, affixes, *dict);
        train_ptr = &train_rmwe;
        test_ptr = &test_rmwe;
      }
      const Corpus train_cols =
          annotate_columns(train_base, affixes, frequencies, train_ptr, config);
      const Corpus test_cols =
          annotate_columns(test_base, affixes, frequencies, test_ptr, config);

      TrainConfig tc;
      tc.sigma = opt.sigma;
      tc.max_iterations = opt.max_iter;
      tc.gradient_tolerance = opt.tolerance;
      tc.min_feature_count = opt.min_feature_count;
      tc.threads = opt.threads;
      const CrfModel model =
          train(train_cols, default_best_template(config), tc);
      const Corpus tagged = tag_corpus(test_cols, model, opt.threads);
      const EvalReport report = evaluate(test_cols, tagged);
      row.recall = report.recall;
      row.precision = report.precision;
      row.f = report.f_score;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.error.empty() != b.error.empty()) return a.error.empty();
    return a.f > b.f;
  });

  std::ostringstream table;
  table << "recall\tprecision\tf-score\tconfiguration\n";
  bool any_failed = false;
  for (const Row& row : rows) {
    if (row.error.empty()) {
      char cells[64];
      std::snprintf(cells, sizeof(cells), "%.2f\t%.2f\t%.2f\t",
                    100.0 * row.recall, 100.0 * row.precision, 100.0 * row.f);
      table << cells << row.name << '\n';
    } else {
      any_failed = true;
      table << "-\t-\t-\t" << row.name << "  [failed: " << row.error << "]\n";
    }
  }
  emit(table.str(), opt.output, out);
  return any_failed ? 1 : 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"morphtag: affix-stripping stemmer, reduplicated-expression "
               "detector and CRF sequence labeler"};
  app.set_version_flag("--version", "morphtag 0.1.0");
  app.set_config("--config");
  app.require_subcommand(1);

  StemOptions stem_opt;
  CLI::App* stem_cmd = app.add_subcommand(
      "stem", "Strip affixes from whitespace-separated words");
  stem_cmd->add_option("--prefixes", stem_opt.prefixes, "prefix list file")
      ->required();
  stem_cmd->add_option("--suffixes", stem_opt.suffixes, "suffix list file")
      ->required();
  stem_cmd->add_option("--order", stem_opt.order, "strip order: ps or sp")
      ->check(CLI::IsMember({"ps", "sp"}));
  stem_cmd->add_option("input", stem_opt.input, "input text file")->required();
  stem_cmd->add_option("-o,--output", stem_opt.output, "output file");

  RmweOptions rmwe_opt;
  CLI::App* rmwe_cmd = app.add_subcommand(
      "rmwe", "Mark reduplicated multiword expressions with a BIO column");
  rmwe_cmd->add_option("--dict", rmwe_opt.dict, "dictionary file")->required();
  rmwe_cmd->add_option("--prefixes", rmwe_opt.prefixes, "prefix list file")
      ->required();
  rmwe_cmd->add_option("--suffixes", rmwe_opt.suffixes, "suffix list file")
      ->required();
  rmwe_cmd->add_option("input", rmwe_opt.input, "column file")->required();
  rmwe_cmd->add_option("-o,--output", rmwe_opt.output, "output file");

  ExtractOptions extract_opt;
  CLI::App* extract_cmd = app.add_subcommand(
      "extract", "Expand tokens into observation columns for training");
  extract_cmd->add_option("--prefixes", extract_opt.prefixes, "prefix list file")
      ->required();
  extract_cmd->add_option("--suffixes", extract_opt.suffixes, "suffix list file")
      ->required();
  extract_cmd->add_option("--dict", extract_opt.dict, "dictionary file");
  extract_cmd->add_option("--features", extract_opt.features,
                          "feature configuration, e.g. \"W[-2,+1], SW[-1,+1], "
                          "P[1], S[4], L, F, NS, NP, D, SF\"");
  extract_cmd->add_option("--freq-corpus", extract_opt.freq_corpus,
                          "column file supplying word frequencies "
                          "(default: the input itself)");
  extract_cmd->add_option("--write-template", extract_opt.write_template,
                          "also write the matching template file");
  extract_cmd->add_flag("--rmwe", extract_opt.rmwe,
                        "add the expression BIO column (needs --dict)");
  extract_cmd->add_flag("--raw", extract_opt.raw,
                        "treat input as raw text and tokenize it first");
  extract_cmd->add_option("input", extract_opt.input, "input file")->required();
  extract_cmd->add_option("-o,--output", extract_opt.output, "output file");

  TrainOptions train_opt;
  CLI::App* train_cmd =
      app.add_subcommand("train", "Train a CRF model from a labeled column file");
  train_cmd->add_option("--template", train_opt.template_path, "template file")
      ->required();
  train_cmd->add_option("--sigma", train_opt.sigma,
                        "Gaussian prior scale (default 1.0)");
  train_cmd->add_option("--max-iter", train_opt.max_iter,
                        "iteration cap (default 200)");
  train_cmd->add_option("--tolerance", train_opt.tolerance,
                        "gradient max-norm stopping tolerance");
  train_cmd->add_option("--min-feature-count", train_opt.min_feature_count,
                        "drop feature strings seen fewer times");
  train_cmd->add_option("--threads", train_opt.threads,
                        "worker threads (0 = all cores)");
  train_cmd->add_option("--optimizer", train_opt.optimizer,
                        "lbfgs (default) or gd")
      ->check(CLI::IsMember({"lbfgs", "gd"}));
  train_cmd->add_option("--init-seed", train_opt.init_seed,
                        "random weight initialization seed (default: zeros)");
  train_cmd->add_option("--log-format", train_opt.log_format,
                        "progress format: plain or tsv")
      ->check(CLI::IsMember({"plain", "tsv"}));
  train_cmd->add_flag("--quiet", train_opt.quiet, "suppress progress output");
  train_cmd->add_option("input", train_opt.input, "training column file")
      ->required();
  train_cmd->add_option("-o,--output", train_opt.output, "model file")
      ->required();

  TagOptions tag_opt;
  CLI::App* tag_cmd =
      app.add_subcommand("tag", "Append predicted labels to a column file");
  tag_cmd->add_option("--model", tag_opt.model, "model file")->required();
  tag_cmd->add_option("--threads", tag_opt.threads, "worker threads");
  tag_cmd->add_option("input", tag_opt.input, "column file")->required();
  tag_cmd->add_option("-o,--output", tag_opt.output, "output file");

  EvalOptions eval_opt;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Score a predicted column file against gold labels");
  eval_cmd->add_option("gold", eval_opt.gold, "gold column file")->required();
  eval_cmd->add_option("predicted", eval_opt.predicted, "predicted column file")
      ->required();
  eval_cmd->add_option("--exclude-label", eval_opt.exclude_labels,
                       "labels that do not count as answers (repeatable)");

  SweepOptions sweep_opt;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Train and score a list of feature configurations");
  sweep_cmd->add_option("--configs", sweep_opt.configs,
                        "file with one feature configuration per line")
      ->required();
  sweep_cmd->add_option("--train", sweep_opt.train, "labeled training file")
      ->required();
  sweep_cmd->add_option("--test", sweep_opt.test, "labeled test file")
      ->required();
  sweep_cmd->add_option("--prefixes", sweep_opt.prefixes, "prefix list file")
      ->required();
  sweep_cmd->add_option("--suffixes", sweep_opt.suffixes, "suffix list file")
      ->required();
  sweep_cmd->add_option("--dict", sweep_opt.dict, "dictionary file");
  sweep_cmd->add_option("--sigma", sweep_opt.sigma, "Gaussian prior scale");
  sweep_cmd->add_option("--max-iter", sweep_opt.max_iter, "iteration cap");
  sweep_cmd->add_option("--tolerance", sweep_opt.tolerance,
                        "gradient stopping tolerance");
  sweep_cmd->add_option("--min-feature-count", sweep_opt.min_feature_count,
                        "drop feature strings seen fewer times");
  sweep_cmd->add_option("--threads", sweep_opt.threads, "worker threads");
  sweep_cmd->add_option("-o,--output", sweep_opt.output, "results file");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    const auto parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << app.version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*stem_cmd) return run_stem(stem_opt, out, err);
    if (*rmwe_cmd) return run_rmwe(rmwe_opt, out, err);
    if (*extract_cmd) return run_extract(extract_opt, out, err);
    if (*train_cmd) return run_train(train_opt, out, err);
    if (*tag_cmd) return run_tag(tag_opt, out, err);
    if (*eval_cmd) return run_eval(eval_opt, out);
    if (*sweep_cmd) return run_sweep(sweep_opt, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace morphtag::cli
