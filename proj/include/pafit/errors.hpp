#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pafit {

// Argument outside the domain of a physical relation (r <= 0, E >= 0, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// An iterative numerical method failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
  NumericError(const std::string &what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

private:
  double achieved_;
};

// Malformed or invalid input text. line() is 1-based; 0 when not applicable.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &what, std::size_t line, std::string field = {})
      : std::runtime_error(what), line_(line), field_(std::move(field)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string &field() const noexcept { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

class IdentifiabilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class AssignmentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bound-state grid too coarse for the requested accuracy.
class ResolutionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace pafit
