#pragma once

#include "quadrature.hpp"

namespace istn {

/// Earth and satellite-shell radii with the horizon geocentric angle.
class SatGeometry {
 public:
  /// Throws DomainError unless 0 < r_earth < r_shell.
  SatGeometry(double r_earth, double r_shell);

  double r_earth() const { return r_earth_; }
  double r_shell() const { return r_shell_; }
  /// arccos(R_E / R_S): the geocentric angle of a satellite on the horizon.
  double psi_max() const { return psi_max_; }
  double altitude() const { return r_shell_ - r_earth_; }

 private:
  double r_earth_;
  double r_shell_;
  double psi_max_;
};

/// Geocentric angles below this are treated as the zenith.
inline constexpr double kZenithAngle = 1e-9;

double elevation_from_geocentric(const SatGeometry& g, double psi);
double slant_distance(const SatGeometry& g, double psi);

/// Slope of the user-satellite ray in the user's tangent frame, i.e. the
/// tangent of the elevation angle.
double ray_slope(const SatGeometry& g, double psi_s);

/// Minimum height of a blockage at geocentric angle psi_b that cuts the ray to
/// a satellite at psi_s. Requires 0 <= psi_b <= psi_s <= psi_max, psi_s > 0.
double threshold_height(const SatGeometry& g, double psi_b, double psi_s);

/// Average probability that a Rayleigh(sigma_b) blockage placed uniformly on
/// the ground track [0, psi_s] cuts the link. Exactly 1 at the zenith.
double curvature_scaling(const SatGeometry& g, double psi_s, double sigma_b, double tol = 1e-12);

/// The same average without the zenith convention: for psi_s near zero this
/// returns the right-hand limit rather than 1.
double curvature_scaling_average(const SatGeometry& g, double psi_s, double sigma_b, double tol = 1e-12);

}  // namespace istn
