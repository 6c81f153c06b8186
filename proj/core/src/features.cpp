#include "morphtag/features.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "morphtag/errors.hpp"
#include "morphtag/unicode.hpp"

namespace morphtag {

namespace {

constexpr int kMaxPrefixSlots = 3;
constexpr int kMaxSuffixSlots = 10;

int clamp_slots(int requested, int cap) {
  return std::max(0, std::min(requested, cap));
}

}  // namespace

ColumnLayout column_layout(const FeatureConfig& config) {
  ColumnLayout layout;
  layout.prefix_slots = clamp_slots(config.prefix_slots, kMaxPrefixSlots);
  layout.suffix_slots = clamp_slots(config.suffix_slots, kMaxSuffixSlots);
  layout.suffix_first = layout.prefix_first + layout.prefix_slots;
  int next = layout.suffix_first + layout.suffix_slots;
  layout.length = next++;
  layout.frequency = next++;
  layout.digit = next++;
  layout.symbol = next++;
  layout.rmwe = config.use_rmwe ? next++ : -1;
  layout.observation_columns = next;
  return layout;
}

void FrequencyTable::add(const std::string& surface, std::size_t n) {
  counts_[surface] += n;
}

std::size_t FrequencyTable::count(const std::string& surface) const {
  auto it = counts_.find(surface);
  return it == counts_.end() ? 0 : it->second;
}

FrequencyTable build_frequency_table(const Corpus& corpus) {
  FrequencyTable table;
  for (const Sentence& sentence : corpus.sentences) {
    for (const Token& token : sentence.tokens) table.add(token.surface());
  }
  return table;
}

namespace {

bool any_codepoint(const std::string& text, bool (*pred)(char32_t)) {
  for (char32_t cp : uni::decode_utf8(text)) {
    if (pred(cp)) return true;
  }
  return false;
}

}  // namespace

Corpus annotate_columns(const Corpus& corpus, const AffixList& affixes,
                        const FrequencyTable& frequencies,
                        const std::vector<std::vector<std::string>>* rmwe_labels,
                        const FeatureConfig& config) {
  if (config.use_rmwe != (rmwe_labels != nullptr)) {
    throw std::invalid_argument(
        "use_rmwe and the rmwe_labels argument must agree");
  }
  if (rmwe_labels && rmwe_labels->size() != corpus.sentences.size()) {
    throw std::invalid_argument("rmwe_labels sentence count mismatch");
  }
  const ColumnLayout layout = column_layout(config);
  const bool has_label = corpus.column_count >= 2;

  Corpus out;
  out.column_count = static_cast<std::size_t>(layout.observation_columns) +
                     (has_label ? 1 : 0);
  out.sentences.reserve(corpus.sentences.size());

  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const Sentence& sentence = corpus.sentences[s];
    if (rmwe_labels && (*rmwe_labels)[s].size() != sentence.size()) {
      throw std::invalid_argument("rmwe_labels token count mismatch");
    }
    Sentence annotated;
    annotated.tokens.reserve(sentence.size());
    for (std::size_t t = 0; t < sentence.size(); ++t) {
      const Token& token = sentence.tokens[t];
      const std::string& surface = token.surface();
      const StemResult stemmed = stem(surface, affixes);

      std::vector<std::string> cells(
          static_cast<std::size_t>(out.column_count));
      cells[layout.surface] = surface;
      cells[layout.stem] = stemmed.stem;
      cells[layout.np] = std::to_string(stemmed.prefix_count());
      cells[layout.ns] = std::to_string(stemmed.suffix_count());
      for (int k = 0; k < layout.prefix_slots; ++k) {
        cells[layout.prefix_first + k] =
            k < static_cast<int>(stemmed.stripped_prefixes.size())
                ? stemmed.stripped_prefixes[k]
                : "0";
      }
      for (int k = 0; k < layout.suffix_slots; ++k) {
        cells[layout.suffix_first + k] =
            k < static_cast<int>(stemmed.stripped_suffixes.size())
                ? stemmed.stripped_suffixes[k]
                : "0";
      }
      cells[layout.length] =
          uni::length(surface) > static_cast<std::size_t>(config.length_threshold)
              ? "1"
              : "0";
      cells[layout.frequency] =
          frequencies.count(surface) >=
                  static_cast<std::size_t>(config.frequency_threshold)
              ? "1"
              : "0";
      cells[layout.digit] = any_codepoint(surface, uni::is_digit) ? "1" : "0";
      cells[layout.symbol] = any_codepoint(surface, uni::is_symbol) ? "1" : "0";
      if (layout.rmwe >= 0) cells[layout.rmwe] = (*rmwe_labels)[s][t];
      if (has_label) cells.back() = token.columns.back();

      annotated.tokens.push_back(Token{std::move(cells)});
    }
    out.sentences.push_back(std::move(annotated));
  }
  return out;
}

// --- configuration notation ------------------------------------------------

namespace {

std::string trim(std::string_view text) {
  std::size_t b = text.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  std::size_t e = text.find_last_not_of(" \t");
  return std::string(text.substr(b, e - b + 1));
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error("bad " + std::string(what) + " in feature configuration: '" +
                std::string(text) + "'");
  }
  return value;
}

// "NAME[a,b]" -> {a, b}; magnitudes are taken, so W[-2,+1] == W[2,1].
Window parse_window(std::string_view body, std::string_view name) {
  std::size_t comma = body.find(',');
  if (comma == std::string_view::npos) {
    throw Error("bad " + std::string(name) + " window: expected two offsets");
  }
  Window w;
  w.left = std::abs(parse_int(trim(body.substr(0, comma)), name));
  w.right = std::abs(parse_int(trim(body.substr(comma + 1)), name));
  return w;
}

}  // namespace

FeatureConfig parse_feature_config(std::string_view text) {
  FeatureConfig config;
  // Start from nothing: every term must be named explicitly.
  config.word_window = Window{0, 0};
  config.stem_window.reset();
  config.prefix_slots = 0;
  config.suffix_slots = 0;
  config.use_length = false;
  config.use_frequency = false;
  config.use_suffix_count = false;
  config.use_prefix_count = false;
  config.use_digit = false;
  config.use_symbol = false;
  config.use_rmwe = false;

  std::size_t pos = 0;
  bool saw_word_window = false;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    // Windows contain a comma inside brackets; skip over it.
    std::size_t bracket = text.find('[', pos);
    if (comma != std::string_view::npos && bracket != std::string_view::npos &&
        bracket < comma) {
      std::size_t close = text.find(']', bracket);
      if (close == std::string_view::npos) throw Error("unclosed '[' in feature configuration");
      comma = text.find(',', close);
    }
    std::string term = trim(comma == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, comma - pos));
    pos = (comma == std::string_view::npos) ? text.size() + 1 : comma + 1;
    if (term.empty()) continue;

    if (term.front() == 'W' || term.front() == 'S' || term.front() == 'P') {
      std::size_t open = term.find('[');
      if (open != std::string::npos) {
        if (term.back() != ']') {
          throw Error("bad term '" + term + "' in feature configuration");
        }
        std::string name = trim(std::string_view(term).substr(0, open));
        std::string_view body =
            std::string_view(term).substr(open + 1, term.size() - open - 2);
        if (name == "W") {
          config.word_window = parse_window(body, "W");
          saw_word_window = true;
        } else if (name == "SW") {
          config.stem_window = parse_window(body, "SW");
        } else if (name == "P") {
          config.prefix_slots = parse_int(trim(body), "P");
        } else if (name == "S") {
          config.suffix_slots = parse_int(trim(body), "S");
        } else {
          throw Error("unknown term '" + term + "' in feature configuration");
        }
        continue;
      }
    }
    if (term == "L") config.use_length = true;
    else if (term == "F") config.use_frequency = true;
    else if (term == "NS") config.use_suffix_count = true;
    else if (term == "NP") config.use_prefix_count = true;
    else if (term == "D") config.use_digit = true;
    else if (term == "SF") config.use_symbol = true;
    else if (term == "RMWE") config.use_rmwe = true;
    else throw Error("unknown term '" + term + "' in feature configuration");
  }
  if (!saw_word_window) {
    throw Error("feature configuration needs a word window, e.g. W[-2,+1]");
  }
  return config;
}

std::string format_feature_config(const FeatureConfig& config) {
  std::ostringstream out;
  out << "W[-" << config.word_window.left << ",+" << config.word_window.right
      << "]";
  if (config.stem_window) {
    out << ", SW[-" << config.stem_window->left << ",+"
        << config.stem_window->right << "]";
  }
  const ColumnLayout layout = column_layout(config);
  if (layout.prefix_slots > 0) out << ", P[" << layout.prefix_slots << "]";
  if (layout.suffix_slots > 0) out << ", S[" << layout.suffix_slots << "]";
  if (config.use_length) out << ", L";
  if (config.use_frequency) out << ", F";
  if (config.use_suffix_count) out << ", NS";
  if (config.use_prefix_count) out << ", NP";
  if (config.use_digit) out << ", D";
  if (config.use_symbol) out << ", SF";
  if (config.use_rmwe) out << ", RMWE";
  return out.str();
}

}  // namespace morphtag
