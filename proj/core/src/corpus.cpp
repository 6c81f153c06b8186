#include "morphtag/corpus.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "morphtag/unicode.hpp"

namespace morphtag {

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

bool TokenizerOptions::is_symbol(char32_t cp) const {
  return uni::is_symbol(cp) || extra_symbols.count(cp) != 0;
}

std::vector<Sentence> tokenize(std::string_view text,
                               const TokenizerOptions& options) {
  std::vector<Sentence> sentences;
  Sentence sentence;
  std::string current;

  const auto flush_token = [&] {
    if (!current.empty()) {
      sentence.tokens.push_back(Token{{current}});
      current.clear();
    }
  };
  const auto flush_sentence = [&] {
    flush_token();
    if (!sentence.empty()) {
      sentences.push_back(std::move(sentence));
      sentence = Sentence{};
    }
  };

  const std::u32string codepoints = uni::decode_utf8(text);
  for (char32_t cp : codepoints) {
    if (uni::is_space(cp)) {
      flush_token();
    } else if (options.is_terminator(cp) || options.is_symbol(cp)) {
      flush_token();
      sentence.tokens.push_back(Token{{uni::encode_utf8(cp)}});
      if (options.is_terminator(cp)) flush_sentence();
    } else {
      current += uni::encode_utf8(cp);
    }
  }
  flush_sentence();
  return sentences;
}

namespace {

// Splits a line on runs of spaces/tabs; empty result means a blank line.
std::vector<std::string> split_cells(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) cells.emplace_back(line.substr(start, i - start));
  }
  return cells;
}

}  // namespace

Corpus parse_column_file(std::string_view text) {
  Corpus corpus;
  Sentence sentence;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  const auto end_sentence = [&] {
    if (!sentence.empty()) {
      corpus.sentences.push_back(std::move(sentence));
      sentence = Sentence{};
    }
  };

  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::vector<std::string> cells = split_cells(line);
    if (cells.empty()) {
      end_sentence();
      continue;
    }
    if (corpus.column_count == 0) {
      corpus.column_count = cells.size();
    } else if (cells.size() != corpus.column_count) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected " << corpus.column_count
          << " columns, got " << cells.size();
      throw RaggedColumnsError(msg.str(), line_no);
    }
    sentence.tokens.push_back(Token{std::move(cells)});
  }
  end_sentence();
  return corpus;
}

std::string write_column_file(const Corpus& corpus) {
  std::string out;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    if (s > 0) out += '\n';
    for (const Token& token : corpus.sentences[s].tokens) {
      for (std::size_t c = 0; c < token.columns.size(); ++c) {
        if (c > 0) out += ' ';
        out += token.columns[c];
      }
      out += '\n';
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path.string());
  return buffer.str();
}

Corpus read_column_file(const std::filesystem::path& path) {
  return parse_column_file(read_text_file(path));
}

void write_text_file_atomic(const std::filesystem::path& path,
                            std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed on " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace " + path.string());
  }
}

}  // namespace morphtag
