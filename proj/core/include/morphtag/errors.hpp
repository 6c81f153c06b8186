#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morphtag {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A column file whose rows disagree on the number of columns.
class RaggedColumnsError : public Error {
 public:
  RaggedColumnsError(const std::string& msg, std::size_t line)
      : Error(msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Malformed feature template.
class TemplateParseError : public Error {
 public:
  TemplateParseError(const std::string& msg, std::size_t line)
      : Error(msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Overlapping spans handed to the BIO encoder.
class OverlapError : public Error {
 public:
  using Error::Error;
};

/// A label that the model has never seen.
class UnknownLabelError : public Error {
 public:
  using Error::Error;
};

/// Training requested on a corpus with no tokens.
class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

/// Model file written by an incompatible format revision.
class VersionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Model file that is truncated or otherwise damaged.
class CorruptModelError : public Error {
 public:
  using Error::Error;
};

/// Gold/predicted corpora whose sentence or token counts do not line up.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace morphtag
