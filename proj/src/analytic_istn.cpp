#include "analytic_istn.hpp"

#include <algorithm>

#include "errors.hpp"

namespace istn {

IstnResult istn_coverage(double p_ter, double p_sat) {
  if (!(p_ter >= 0.0 && p_ter <= 1.0) || !(p_sat >= 0.0 && p_sat <= 1.0))
    throw DomainError("tier coverages must lie in [0, 1]");
  IstnResult r;
  r.p_sat = p_sat;
  r.p_ter = p_ter;
  const double hi = std::max(p_ter, p_sat);
  const double lo = std::min(p_ter, p_sat);
  r.p_istn = hi + lo * (1.0 - hi);
  r.gain = r.p_istn - hi;
  return r;
}

}  // namespace istn
