#include "errors.hpp"

namespace istn {
namespace {

std::string join(const std::vector<FieldError>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += "; ";
    out += e.field + ": " + e.message;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

ConfigError::ConfigError(std::string field, std::string message)
    : ConfigError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}

}  // namespace istn
