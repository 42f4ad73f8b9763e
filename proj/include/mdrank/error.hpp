#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdrank {

/// Input that violates a format or domain rule (bad row, missing class, ...).
/// Carries the 1-based source line when the problem came from a text table.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A classifier could not be fitted (too few items, singular covariance).
class FitError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mdrank
