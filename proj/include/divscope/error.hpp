#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace divscope {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invariant-violating input file. Carries the 1-based line
/// number when the failure is line-addressable (0 otherwise).
class FormatError : public Error {
 public:
  FormatError(const std::string& source, std::size_t line, const std::string& what)
      : Error(line ? source + ":" + std::to_string(line) + ": " + what : source + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A metric precondition does not hold (too few items, empty n-gram set...).
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace divscope
