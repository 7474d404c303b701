#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace transit {

/// Base of all library errors. `kind()` is a short machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(detail), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Bad input: wrong shapes, invalid JSON, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
  explicit ValidationError(const std::string& detail) : Error("validation", detail) {}
};

/// A numerical procedure did not reach its tolerance. Carries diagnostics
/// (best residual, achieved error estimate, ...) keyed by name.
class NumericalError : public Error {
 public:
  NumericalError(std::string kind, const std::string& detail,
                 std::map<std::string, double> diagnostics = {})
      : Error(std::move(kind), detail), diagnostics_(std::move(diagnostics)) {}
  const std::map<std::string, double>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::map<std::string, double> diagnostics_;
};

}  // namespace transit
