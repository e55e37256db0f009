#pragma once

#include <stdexcept>
#include <string>

namespace platoon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DisconnectedNetwork : public Error {
 public:
  using Error::Error;
};

class InstanceInvalid : public Error {
 public:
  using Error::Error;
};

class DemandExceedsCapacity : public Error {
 public:
  using Error::Error;
};

class MalformedSolution : public Error {
 public:
  using Error::Error;
};

class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

class NoFeasibleSolutionFound : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// JSON or MPS input that could not be parsed. Line and column are 1-based,
/// 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace platoon
