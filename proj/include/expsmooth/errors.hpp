#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace expsmooth {

// Base for data-level failures (bad stream contents, broken state).
// Argument precondition violations throw std::invalid_argument instead,
// so callers can tell "you passed garbage" from "the data is bad".
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Timestamp ordering contract violation. V1 requires nondecreasing
// timestamps, V2 strictly increasing ones.
class OutOfOrderError : public Error {
public:
  OutOfOrderError(const std::string& what, double previous_t, double offending_t)
      : Error(what), previous_t_(previous_t), offending_t_(offending_t) {}

  double previous_t() const noexcept { return previous_t_; }
  double offending_t() const noexcept { return offending_t_; }

private:
  double previous_t_;
  double offending_t_;
};

// State cannot produce a value (zero normalizer, alpha = 1 poisoning).
class DegenerateStateError : public Error {
public:
  using Error::Error;
};

class EmptyInputError : public Error {
public:
  using Error::Error;
};

// Malformed input line; line numbers are 1-based.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line) : Error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace expsmooth
