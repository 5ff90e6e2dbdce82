#pragma once

namespace istn {

struct IstnResult {
  double p_sat = 0.0;
  double p_ter = 0.0;
  double p_istn = 0.0;
  double gain = 0.0;  // p_istn - max(p_sat, p_ter)
};

/// Union coverage of two independent tiers. Throws DomainError unless both
/// inputs lie in [0, 1].
IstnResult istn_coverage(double p_ter, double p_sat);

}  // namespace istn
