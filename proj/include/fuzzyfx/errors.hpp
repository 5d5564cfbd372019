#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fuzzyfx {

// Base for every error the library reports. Anything else escaping the
// library (std::logic_error and friends) is an internal fault.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind { MissingColumn, MalformedRow, NonMonotonicTimestamp, EmptySeries };

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t row, const std::string& what)
      : Error(what), kind_(kind), row_(row) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  // 1-based data row (the header is row 0).
  std::size_t row() const noexcept { return row_; }

 private:
  ParseErrorKind kind_;
  std::size_t row_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class InsufficientHistory : public Error {
 public:
  using Error::Error;
};

class NoRuleFired : public Error {
 public:
  NoRuleFired() : Error("no fuzzy rule fired for the given inputs") {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptySeries : public Error {
 public:
  EmptySeries() : Error("candle series is empty") {}
};

}  // namespace fuzzyfx
