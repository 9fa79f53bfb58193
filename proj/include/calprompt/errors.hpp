// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

#include <stdexcept>
#include <string>

namespace calprompt {

// Every error raised by the engine derives from Error. The CLI maps Error to
// exit code 1 and anything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector or matrix lengths disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite or out-of-domain numeric operand (zero divisor in strict mode,
// NaN score, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Input parsed but violates a cross-file invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace calprompt
