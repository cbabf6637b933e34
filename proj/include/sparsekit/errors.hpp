#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sparsekit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something outside an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (non-convergence, infeasibility, rank loss).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive computation was refused because it exceeds its cap.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail, const std::string& source = {})
      : Error((source.empty() ? std::string() : source + ": ") + "line " + std::to_string(line) + ": " +
              detail),
        line_(line),
        detail_(detail) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

}  // namespace sparsekit
