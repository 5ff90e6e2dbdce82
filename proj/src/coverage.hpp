#pragma once

#include <cstdint>
#include <string_view>

namespace istn {

enum class Method { Analytic, MonteCarlo };
enum class Tier { Sat, Ter, Istn };

std::string_view to_string(Method m);
std::string_view to_string(Tier t);

/// A coverage probability with its provenance. Analytic results carry a
/// quadrature error estimate; Monte Carlo results a 95% half-width.
struct CoverageResult {
  double coverage = 0.0;
  Method method = Method::Analytic;
  double ci_half_width = 0.0;
  double quad_err = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

}  // namespace istn
