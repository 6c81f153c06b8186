#include "morphtag/rmwe.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "morphtag/errors.hpp"

namespace morphtag {

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != '\t' && line[i] != ' ') ++i;
    if (i > start) fields.emplace_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace

Dictionary Dictionary::parse(std::string_view text) {
  Dictionary dict;
  bool mimic_section = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line == "#MIMIC") mimic_section = true;
      continue;  // any other #-line is a comment
    }
    std::vector<std::string> fields = split_fields(line);
    if (fields.empty()) continue;
    if (mimic_section) {
      if (fields.size() >= 2) {
        dict.add_onomatopoeic_pair(fields[0], fields[1]);
      }
      continue;
    }
    std::set<std::string> senses;
    if (fields.size() >= 2) {
      std::stringstream ss(fields[1]);
      std::string sense;
      while (std::getline(ss, sense, ',')) {
        if (!sense.empty()) senses.insert(sense);
      }
    }
    dict.add_entry(fields[0], std::move(senses));
  }
  return dict;
}

Dictionary Dictionary::from_file(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

void Dictionary::add_entry(std::string surface, std::set<std::string> senses) {
  auto [it, inserted] = entries_.try_emplace(std::move(surface), std::move(senses));
  if (!inserted) {
    // Merged sense sets for repeated surfaces.
    it->second.insert(senses.begin(), senses.end());
  }
}

void Dictionary::add_onomatopoeic_pair(std::string first, std::string second) {
  pairs_.emplace(std::move(first), std::move(second));
}

bool Dictionary::contains(const std::string& surface) const {
  return entries_.count(surface) != 0;
}

const std::set<std::string>* Dictionary::senses(const std::string& surface) const {
  auto it = entries_.find(surface);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Dictionary::is_onomatopoeic_pair(const std::string& first,
                                      const std::string& second) const {
  return pairs_.count({first, second}) != 0;
}

const char* to_string(RmweKind kind) {
  switch (kind) {
    case RmweKind::Complete: return "complete";
    case RmweKind::Partial: return "partial";
    case RmweKind::Echo: return "echo";
    case RmweKind::Mimic: return "mimic";
    case RmweKind::Double: return "double";
    case RmweKind::Semantic: return "semantic";
  }
  return "?";
}

namespace {

using sv = std::string_view;

bool proper_prefix_of(const std::string& affix, const std::string& word) {
  return word.size() > affix.size() && sv(word).starts_with(affix);
}

bool proper_suffix_of(const std::string& affix, const std::string& word) {
  return word.size() > affix.size() && sv(word).ends_with(affix);
}

// Three-token form: w repeated twice, and w minus some list prefix or list
// suffix starts the third word. The residue must be non-empty.
bool double_form(const std::string& w, const std::string& third,
                 const AffixList& affixes) {
  for (const std::string& p : affixes.prefixes) {
    if (!proper_prefix_of(p, w)) continue;
    sv residue = sv(w).substr(p.size());
    if (sv(third).starts_with(residue)) return true;
  }
  for (const std::string& s : affixes.suffixes) {
    if (!proper_suffix_of(s, w)) continue;
    sv residue = sv(w).substr(0, w.size() - s.size());
    if (sv(third).starts_with(residue)) return true;
  }
  return false;
}

// Complete form for distinct words: second == first + listed suffix.
bool complete_by_suffix(const std::string& first, const std::string& second,
                        const AffixList& affixes) {
  if (second.size() <= first.size() || !sv(second).starts_with(first)) {
    return false;
  }
  sv extra = sv(second).substr(first.size());
  for (const std::string& s : affixes.suffixes) {
    if (extra == s) return true;
  }
  return false;
}

// Echo form: both words end in the same listed suffix and the echo word is
// meaningless, i.e. absent from the dictionary. An empty lexicon cannot
// attest meaninglessness, so it disables the check entirely.
bool echo_form(const std::string& first, const std::string& second,
               const AffixList& affixes, const Dictionary& dict) {
  if (!dict.has_entries() || dict.contains(second)) return false;
  for (const std::string& s : affixes.suffixes) {
    if (proper_suffix_of(s, first) && proper_suffix_of(s, second)) return true;
  }
  return false;
}

// Partial form: a listed prefix starts both words, or some listed affix ends
// the first word and begins the second.
bool partial_form(const std::string& first, const std::string& second,
                  const AffixList& affixes) {
  for (const std::string& p : affixes.prefixes) {
    if (proper_prefix_of(p, first) && proper_prefix_of(p, second)) return true;
  }
  const auto bridges = [&](const std::string& a) {
    return proper_suffix_of(a, first) && proper_prefix_of(a, second);
  };
  for (const std::string& a : affixes.prefixes) {
    if (bridges(a)) return true;
  }
  for (const std::string& a : affixes.suffixes) {
    if (bridges(a)) return true;
  }
  return false;
}

bool semantic_pair(const std::string& first, const std::string& second,
                   const Dictionary& dict) {
  if (first == second) return false;
  const std::set<std::string>* a = dict.senses(first);
  const std::set<std::string>* b = dict.senses(second);
  if (!a || !b) return false;
  for (const std::string& sense : *a) {
    if (b->count(sense)) return true;
  }
  return false;
}

}  // namespace

std::vector<RmweSpan> identify_rmwe(const Sentence& sentence,
                                    const AffixList& affixes,
                                    const Dictionary& dict) {
  std::vector<RmweSpan> spans;
  const auto& tokens = sentence.tokens;
  std::size_t i = 0;
  while (i + 1 < tokens.size()) {
    const std::string& w1 = tokens[i].surface();
    const std::string& w2 = tokens[i + 1].surface();
    std::optional<RmweSpan> span;
    if (w1 == w2) {
      if (i + 2 < tokens.size() &&
          double_form(w1, tokens[i + 2].surface(), affixes)) {
        span = RmweSpan{i, i + 2, RmweKind::Double};
      } else if (dict.is_onomatopoeic_pair(w1, w2)) {
        span = RmweSpan{i, i + 1, RmweKind::Mimic};
      } else {
        span = RmweSpan{i, i + 1, RmweKind::Complete};
      }
    } else if (complete_by_suffix(w1, w2, affixes)) {
      span = RmweSpan{i, i + 1, RmweKind::Complete};
    } else if (echo_form(w1, w2, affixes, dict)) {
      span = RmweSpan{i, i + 1, RmweKind::Echo};
    } else if (partial_form(w1, w2, affixes)) {
      span = RmweSpan{i, i + 1, RmweKind::Partial};
    }
    if (span) {
      spans.push_back(*span);
      i = span->end + 1;
    } else {
      ++i;
    }
  }
  return spans;
}

std::vector<RmweSpan> identify_semantic(const Sentence& sentence,
                                        const Dictionary& dict) {
  std::vector<RmweSpan> spans;
  const auto& tokens = sentence.tokens;
  std::size_t i = 0;
  while (i + 1 < tokens.size()) {
    if (semantic_pair(tokens[i].surface(), tokens[i + 1].surface(), dict)) {
      spans.push_back(RmweSpan{i, i + 1, RmweKind::Semantic});
      i += 2;
    } else {
      ++i;
    }
  }
  return spans;
}

std::vector<RmweSpan> identify_all(const Sentence& sentence,
                                   const AffixList& affixes,
                                   const Dictionary& dict) {
  std::vector<RmweSpan> spans = identify_rmwe(sentence, affixes, dict);
  std::vector<bool> covered(sentence.size(), false);
  for (const RmweSpan& span : spans) {
    for (std::size_t t = span.start; t <= span.end; ++t) covered[t] = true;
  }
  const auto& tokens = sentence.tokens;
  std::size_t i = 0;
  while (i + 1 < tokens.size()) {
    if (!covered[i] && !covered[i + 1] &&
        semantic_pair(tokens[i].surface(), tokens[i + 1].surface(), dict)) {
      spans.push_back(RmweSpan{i, i + 1, RmweKind::Semantic});
      i += 2;
    } else {
      ++i;
    }
  }
  std::sort(spans.begin(), spans.end(),
            [](const RmweSpan& a, const RmweSpan& b) { return a.start < b.start; });
  return spans;
}

std::vector<std::string> to_bio(const Sentence& sentence,
                                const std::vector<RmweSpan>& spans) {
  std::vector<std::string> labels(sentence.size(), "O");
  for (const RmweSpan& span : spans) {
    if (span.end < span.start || span.end >= sentence.size()) {
      std::ostringstream msg;
      msg << "span [" << span.start << "," << span.end
          << "] outside sentence of " << sentence.size() << " tokens";
      throw OverlapError(msg.str());
    }
    for (std::size_t t = span.start; t <= span.end; ++t) {
      if (labels[t] != "O") {
        std::ostringstream msg;
        msg << "overlapping spans at token " << t;
        throw OverlapError(msg.str());
      }
      labels[t] = (t == span.start) ? "B-RMWE" : "I-RMWE";
    }
  }
  return labels;
}

std::vector<std::pair<std::size_t, std::size_t>> spans_from_bio(
    const std::vector<std::string>& labels) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  bool open = false;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (labels[t] == "B-RMWE") {
      spans.emplace_back(t, t);
      open = true;
    } else if (labels[t] == "I-RMWE") {
      if (open) {
        spans.back().second = t;
      } else {
        spans.emplace_back(t, t);  // tolerate a dangling I
        open = true;
      }
    } else {
      open = false;
    }
  }
  return spans;
}

std::vector<std::vector<std::string>> rmwe_bio_labels(const Corpus& corpus,
                                                      const AffixList& affixes,
                                                      const Dictionary& dict) {
  std::vector<std::vector<std::string>> labels;
  labels.reserve(corpus.sentences.size());
  for (const Sentence& sentence : corpus.sentences) {
    labels.push_back(to_bio(sentence, identify_all(sentence, affixes, dict)));
  }
  return labels;
}

}  // namespace morphtag
