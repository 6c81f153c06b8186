#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "morphtag/errors.hpp"

namespace morphtag {

/// One token: a row of whitespace-free cells. Cell 0 is always the surface
/// form; when a file carries gold annotations the last cell is the label.
struct Token {
  std::vector<std::string> columns;

  const std::string& surface() const { return columns.front(); }
  const std::string& label() const { return columns.back(); }

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  bool operator==(const Sentence&) const = default;
};

/// A sequence of sentences with a uniform column count.
struct Corpus {
  std::vector<Sentence> sentences;
  std::size_t column_count = 0;

  std::size_t token_count() const;
  bool empty() const { return sentences.empty(); }

  bool operator==(const Corpus&) const = default;
};

/// Controls raw-text tokenization. Symbols are detached into single-codepoint
/// tokens; terminators additionally close the current sentence. The default
/// symbol inventory is uni::is_symbol; extra_symbols widens it.
struct TokenizerOptions {
  std::set<char32_t> extra_symbols;
  std::set<char32_t> terminators{U'।', U'?', U'!', U'.'};

  bool is_symbol(char32_t cp) const;
  bool is_terminator(char32_t cp) const { return terminators.count(cp) != 0; }
};

/// Splits raw UTF-8 text into sentences of single-column tokens. Whitespace
/// separates tokens and is dropped; every other codepoint is preserved.
std::vector<Sentence> tokenize(std::string_view text,
                               const TokenizerOptions& options = {});

/// Parses token-per-line column text: cells separated by runs of spaces or
/// tabs, sentences separated by blank lines. Throws RaggedColumnsError (with
/// the 1-based line number) if rows disagree on the column count.
Corpus parse_column_file(std::string_view text);

/// Serializes a corpus in canonical form: single-space separators, LF line
/// endings, one blank line between sentences, trailing newline.
std::string write_column_file(const Corpus& corpus);

/// File-level conveniences; throw IoError on filesystem failures.
Corpus read_column_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

/// Writes via a temp file in the same directory plus rename, so readers never
/// observe a half-written file.
void write_text_file_atomic(const std::filesystem::path& path,
                            std::string_view content);

}  // namespace morphtag
