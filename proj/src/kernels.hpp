#pragma once

#include <cmath>

#include "jet.hpp"

namespace istn::detail {

// 1 - (1 + s c)^(-m): the per-interferer PGFL kernel for Gamma(m, c) power.
inline double pgfl_kernel(double s, double c, double m) { return -std::expm1(-m * std::log1p(s * c)); }

// Taylor coefficients of the same kernel in s around s0.
inline Jet pgfl_kernel(double s0, double c, double m, int order) {
  Jet k(order);
  k[0] = pgfl_kernel(s0, c, m);
  if (order == 0) return k;
  const double u = 1.0 + s0 * c;
  const double q = c / u;
  double term = std::pow(u, -m);  // (1 + s0 c)^-m * binom(-m, j) q^j, built up in j
  for (int j = 1; j <= order; ++j) {
    term *= -(m + j - 1) / j * q;
    k[j] = -term;
  }
  return k;
}

// exp(-N s) expanded around s0.
inline Jet noise_factor(double s0, double noise, int order) {
  Jet e(order);
  double c = std::exp(-s0 * noise);
  for (int j = 0; j <= order; ++j) {
    e[j] = c;
    c *= -noise / (j + 1);
  }
  return e;
}

}  // namespace istn::detail
