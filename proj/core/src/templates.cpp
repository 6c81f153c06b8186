#include <algorithm>
#include <charconv>
#include <sstream>
#include <string>

#include "morphtag/errors.hpp"
#include "morphtag/features.hpp"

namespace morphtag {

namespace {

std::string_view trim_view(std::string_view text) {
  std::size_t b = text.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = text.find_last_not_of(" \t\r");
  return text.substr(b, e - b + 1);
}

int parse_number(std::string_view text, std::size_t line_no) {
  int value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw TemplateParseError(
        "line " + std::to_string(line_no) + ": bad number '" +
            std::string(text) + "'",
        line_no);
  }
  return value;
}

// One "%x[row,col]" occurrence.
TemplateTerm parse_term(std::string_view text, std::size_t line_no) {
  const auto fail = [&](const std::string& why) -> TemplateTerm {
    throw TemplateParseError(
        "line " + std::to_string(line_no) + ": " + why + " in '" +
            std::string(text) + "'",
        line_no);
  };
  if (!text.starts_with("%x[") || !text.ends_with("]")) {
    return fail("expected %x[row,col]");
  }
  std::string_view body = text.substr(3, text.size() - 4);
  std::size_t comma = body.find(',');
  if (comma == std::string_view::npos) return fail("expected two indices");
  TemplateTerm term;
  term.row = parse_number(trim_view(body.substr(0, comma)), line_no);
  term.col = parse_number(trim_view(body.substr(comma + 1)), line_no);
  if (term.col < 0) return fail("negative column");
  return term;
}

}  // namespace

std::vector<TemplateRule> parse_template(std::string_view text) {
  std::vector<TemplateRule> rules;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = (eol == std::string_view::npos)
                               ? text.substr(pos)
                               : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
    ++line_no;

    std::string_view line = trim_view(raw);
    if (line.empty() || line.front() == '#') continue;

    TemplateRule rule;
    rule.bigram = line.front() == 'B';
    if (!rule.bigram && line.front() != 'U') {
      throw TemplateParseError(
          "line " + std::to_string(line_no) +
              ": rule must start with 'U' or 'B'",
          line_no);
    }
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      // A bare id ("B", and CRF++ also allows "U") with no observation.
      rule.id = std::string(line);
      rules.push_back(std::move(rule));
      continue;
    }
    rule.id = std::string(trim_view(line.substr(0, colon)));
    if (rule.id.empty()) {
      throw TemplateParseError(
          "line " + std::to_string(line_no) + ": empty rule id", line_no);
    }
    std::string_view terms = line.substr(colon + 1);
    std::size_t tpos = 0;
    while (tpos <= terms.size()) {
      std::size_t slash = terms.find('/', tpos);
      std::string_view term = trim_view(
          slash == std::string_view::npos ? terms.substr(tpos)
                                          : terms.substr(tpos, slash - tpos));
      tpos = (slash == std::string_view::npos) ? terms.size() + 1 : slash + 1;
      if (term.empty()) {
        throw TemplateParseError(
            "line " + std::to_string(line_no) + ": empty %x term", line_no);
      }
      rule.terms.push_back(parse_term(term, line_no));
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

int max_template_column(const std::vector<TemplateRule>& rules) {
  int max_col = -1;
  for (const TemplateRule& rule : rules) {
    for (const TemplateTerm& term : rule.terms) {
      max_col = std::max(max_col, term.col);
    }
  }
  return max_col;
}

namespace {

// Cell lookup with CRF++-style boundary sentinels.
std::string cell_at(const Sentence& sentence, std::ptrdiff_t row, int col) {
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(sentence.size());
  if (row < 0) return "_B" + std::to_string(row);
  if (row >= size) return "_B+" + std::to_string(row - size + 1);
  const auto& columns = sentence.tokens[static_cast<std::size_t>(row)].columns;
  if (col >= static_cast<int>(columns.size())) {
    throw Error("template references column " + std::to_string(col) +
                " but tokens have " + std::to_string(columns.size()));
  }
  return columns[static_cast<std::size_t>(col)];
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

FeatureVector expand_templates(const Sentence& sentence, std::size_t position,
                               const std::vector<TemplateRule>& rules) {
  FeatureVector features;
  for (const TemplateRule& rule : rules) {
    std::string feature = rule.id;
    for (std::size_t k = 0; k < rule.terms.size(); ++k) {
      feature += (k == 0) ? ":" : "/";
      feature += cell_at(sentence,
                         static_cast<std::ptrdiff_t>(position) + rule.terms[k].row,
                         rule.terms[k].col);
    }
    (rule.bigram ? features.bigram : features.unigram).push_back(std::move(feature));
  }
  sort_unique(features.unigram);
  sort_unique(features.bigram);
  return features;
}

std::string default_best_template(const FeatureConfig& config) {
  const ColumnLayout layout = column_layout(config);
  std::ostringstream out;
  int id = 0;
  const auto rule = [&](int row, int col) {
    out << 'U' << (id < 10 ? "0" : "") << id << ":%x[" << row << ',' << col
        << "]\n";
    ++id;
  };
  for (int row = -config.word_window.left; row <= config.word_window.right; ++row) {
    rule(row, layout.surface);
  }
  if (config.stem_window) {
    for (int row = -config.stem_window->left; row <= config.stem_window->right;
         ++row) {
      rule(row, layout.stem);
    }
  }
  for (int k = 0; k < layout.prefix_slots; ++k) rule(0, layout.prefix_first + k);
  for (int k = 0; k < layout.suffix_slots; ++k) rule(0, layout.suffix_first + k);
  if (config.use_length) rule(0, layout.length);
  if (config.use_frequency) rule(0, layout.frequency);
  if (config.use_suffix_count) rule(0, layout.ns);
  if (config.use_prefix_count) rule(0, layout.np);
  if (config.use_digit) rule(0, layout.digit);
  if (config.use_symbol) rule(0, layout.symbol);
  if (config.use_rmwe) rule(0, layout.rmwe);
  out << "B\n";
  return out.str();
}

}  // namespace morphtag
