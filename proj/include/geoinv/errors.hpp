#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace geoinv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

class AlternationError : public Error {
 public:
  using Error::Error;
};

/// Instance data violates a declared symmetry or constraint.
class InstanceError : public Error {
 public:
  using Error::Error;
};

class NotApplicableError : public Error {
 public:
  using Error::Error;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

/// Syntax or index error in an expression, with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column, std::vector<std::string> expected = {})
      : Error(format(message, line, column, expected)), line_(line), column_(column), expected_(std::move(expected))
  {
  }

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(const std::string& message, int line, int column, const std::vector<std::string>& expected)
  {
    std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t k = 0; k < expected.size(); ++k) out += (k ? ", " : "") + expected[k];
      out += ")";
    }
    return out;
  }

  int line_;
  int column_;
  std::vector<std::string> expected_;
};

}  // namespace geoinv
