#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rvnli {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at " + std::to_string(position) + ": " + message), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class SortError : public Error {
 public:
  SortError(std::string symbol, std::string expected, std::string found)
      : Error("sort error on '" + symbol + "': expected " + expected + ", found " + found),
        symbol_(std::move(symbol)), expected_(std::move(expected)), found_(std::move(found)) {}
  const std::string& symbol() const noexcept { return symbol_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::string symbol_, expected_, found_;
};

struct PlaceholderInClosedFormula : Error { using Error::Error; };
struct IllFormedReplacement : Error { using Error::Error; };
struct DialectUnsupportedConstruct : Error { using Error::Error; };

class StageViolation : public Error {
 public:
  StageViolation(std::string stage, std::string detail)
      : Error("stage " + stage + " violation: " + detail), stage_(std::move(stage)), detail_(std::move(detail)) {}
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string stage_, detail_;
};

struct TemplateParseError : Error { using Error::Error; };
struct LlmUnavailable : Error { using Error::Error; };
struct MissingSlot : Error { using Error::Error; };

class UnparseableResponse : public Error {
 public:
  UnparseableResponse(const std::string& what, std::string excerpt)
      : Error(what + " (excerpt: \"" + excerpt + "\")"), excerpt_(std::move(excerpt)) {}
  const std::string& excerpt() const noexcept { return excerpt_; }

 private:
  std::string excerpt_;
};

struct ScorerUnavailable : Error { using Error::Error; };
struct MalformedTreeResponse : Error { using Error::Error; };
struct CycleDetected : Error { using Error::Error; };
struct UnknownNode : Error { using Error::Error; };
struct InvalidTree : Error { using Error::Error; };
struct UnformalisedAtom : Error { using Error::Error; };
struct BudgetInvalid : Error { using Error::Error; };
struct NotProved : Error { using Error::Error; };
struct NameCollision : Error { using Error::Error; };
struct UnknownFormat : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& message)
      : Error("format error at line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rvnli
