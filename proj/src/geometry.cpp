#include "geometry.hpp"

#include <cmath>
#include <numbers>

namespace istn {
namespace {

void check_angle(const SatGeometry& g, double psi, const char* what) {
  // Allow rounding slack at the horizon.
  if (!(psi >= 0.0) || psi > g.psi_max() * (1.0 + 1e-12))
    throw DomainError(std::string(what) + " outside [0, psi_max]");
}

}  // namespace

SatGeometry::SatGeometry(double r_earth, double r_shell) : r_earth_(r_earth), r_shell_(r_shell) {
  if (!(r_earth > 0.0) || !(r_shell > r_earth) || !std::isfinite(r_shell))
    throw DomainError("satellite shell must lie strictly outside the Earth");
  psi_max_ = std::acos(r_earth / r_shell);
}

double elevation_from_geocentric(const SatGeometry& g, double psi) {
  check_angle(g, psi, "geocentric angle");
  if (psi < kZenithAngle) return std::numbers::pi / 2.0;
  // atan2 keeps the zenith limit exact and the horizon value at +0.
  const double num = g.r_shell() * std::cos(psi) - g.r_earth();
  return std::atan2(std::max(num, 0.0), g.r_shell() * std::sin(psi));
}

double slant_distance(const SatGeometry& g, double psi) {
  check_angle(g, psi, "geocentric angle");
  // R_E^2 + R_S^2 - 2 R_E R_S cos(psi) = h^2 + 4 R_E R_S sin^2(psi / 2)
  const double h = g.altitude();
  const double s = std::sin(0.5 * psi);
  return std::sqrt(h * h + 4.0 * g.r_earth() * g.r_shell() * s * s);
}

double ray_slope(const SatGeometry& g, double psi_s) {
  check_angle(g, psi_s, "satellite angle");
  if (psi_s <= 0.0) return std::numeric_limits<double>::infinity();
  return (g.r_shell() * std::cos(psi_s) - g.r_earth()) / (g.r_shell() * std::sin(psi_s));
}

double threshold_height(const SatGeometry& g, double psi_b, double psi_s) {
  check_angle(g, psi_s, "satellite angle");
  if (!(psi_s > 0.0)) throw DomainError("threshold height needs a non-zenith satellite");
  if (!(psi_b >= 0.0) || psi_b > psi_s) throw DomainError("blockage angle outside [0, psi_s]");
  const double re = g.r_earth();
  const double rs = g.r_shell();
  // With T = slope, cos(b) - sin(b) T = (R_S sin(s - b) + R_E sin b) / (R_S sin s),
  // which keeps the psi_b -> psi_s end free of cancellation.
  const double den = rs * std::sin(psi_s - psi_b) + re * std::sin(psi_b);
  const double num = 2.0 * rs * std::cos(psi_s - 0.5 * psi_b) * std::sin(0.5 * psi_b) - re * std::sin(psi_b);
  if (!(den > 0.0)) throw NumericalError("threshold height denominator is not positive");
  return std::max(0.0, re * num / den);
}

double curvature_scaling_average(const SatGeometry& g, double psi_s, double sigma_b, double tol) {
  check_angle(g, psi_s, "satellite angle");
  if (!(sigma_b > 0.0)) throw DomainError("sigma_b must be positive");
  const double psi = std::max(psi_s, kZenithAngle);
  const double two_var = 2.0 * sigma_b * sigma_b;
  auto ccdf = [&](double psi_b) {
    const double h = threshold_height(g, psi_b, psi);
    return std::exp(-h * h / two_var);
  };
  // Beyond 40 sigma the Rayleigh tail is below 1e-347; H_th is non-decreasing
  // in psi_b, so the integrand vanishes past the first crossing.
  const double cut_height = 40.0 * sigma_b;
  double upper = psi;
  if (threshold_height(g, psi, psi) > cut_height) {
    double lo = 0.0;
    double hi = psi;
    for (int i = 0; i < 200 && hi - lo > 1e-18 * psi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (threshold_height(g, mid, psi) > cut_height ? hi : lo) = mid;
    }
    upper = hi;
  }
  QuadratureSpec spec;
  spec.abs_tol = tol * psi;
  spec.rel_tol = 1e-13;
  const auto q = integrate(ccdf, 0.0, upper, spec);
  return std::clamp(q.value / psi, 0.0, 1.0);
}

double curvature_scaling(const SatGeometry& g, double psi_s, double sigma_b, double tol) {
  check_angle(g, psi_s, "satellite angle");
  if (psi_s < kZenithAngle) return 1.0;
  return curvature_scaling_average(g, psi_s, sigma_b, tol);
}

}  // namespace istn
