#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace istn {

/// One violated scenario constraint, tagged with the offending key.
struct FieldError {
  std::string field;
  std::string message;
};

/// Invalid or incomplete scenario input. Carries every violation found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<FieldError> errors);
  ConfigError(std::string field, std::string message);

  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

/// Quadrature non-convergence, out-of-range probabilities and similar.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of a pure function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Output files or directories could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace istn
