#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace statlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual, const std::string& where)
      : Error(where + ": dimension mismatch (expected " + std::to_string(expected) + ", got " +
              std::to_string(actual) + ")") {}
};

/// Input has no well-defined answer (zero vector, exhausted dimension, ...).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An oracle threw while answering; the offending query is attached.
class OracleFailure : public Error {
 public:
  OracleFailure(const std::string& what, std::vector<double> query, std::size_t index)
      : Error(what), query_(std::move(query)), index_(index) {}
  const std::vector<double>& query() const noexcept { return query_; }
  /// 1-based position of the query in the game.
  std::size_t index() const noexcept { return index_; }

 private:
  std::vector<double> query_;
  std::size_t index_;
};

/// The hard-instance construction produced something its proof rules out.
class ConstructionFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace statlab
