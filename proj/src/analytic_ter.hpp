#pragma once

#include <span>
#include <vector>

#include "blockage.hpp"
#include "config.hpp"
#include "coverage.hpp"
#include "quadrature.hpp"

namespace istn {

/// Terrestrial-tier parameters for nearest-TBS association on the plane.
struct TerTierModel {
  double lambda_t = 0.0;
  BlockageModel blockage;
  double tx_power = 0.0;
  double gain_main = 0.0;
  double gain_side = 0.0;
  double alpha_los = 2.0;
  double alpha_nlos = 4.0;
  int nakagami_m = 1;
  double noise = 0.0;
  double path_constant = 1.0;
  /// Drop the s^k factor of the LoS finite sum (literal form of the coverage
  /// expression as printed); off by default.
  bool strict_sum = false;
  QuadratureSpec inner;
  QuadratureSpec outer{.abs_tol = 1e-8, .rel_tol = 1e-8};

  static TerTierModel from_config(const ScenarioConfig& cfg, bool strict_sum = false);

  double serving_gain() const { return tx_power * gain_main * path_constant; }
  double interferer_gain() const { return tx_power * gain_side * path_constant; }
  /// Radius beyond which the nearest-TBS law holds less than 1e-9 mass.
  double r0_max() const;
};

/// Density of the distance to the nearest point of a planar PPP.
double nearest_tbs_pdf(double lambda_t, double r0);

/// Laplace transform of the interference from TBSs beyond r0, LoS and NLoS
/// interferers thinned by distance. The jet overload expands around s.value().
double ter_interference_laplace(const TerTierModel& model, double s, double r0);
Jet ter_interference_laplace(const TerTierModel& model, const Jet& s, double r0);

/// P(SINR > tau | serving TBS at r0 with the given link state), using a
/// Gamma(shape, 1/shape) serving fade and exponent alpha. shape = 1 with the
/// NLoS exponent gives the NLoS branch.
double ter_branch_coverage(const TerTierModel& model, double r0, double tau, int shape, double alpha);

/// P(SINR > tau | serving TBS at r0), mixing the LoS and NLoS branches.
double ter_conditional_coverage(const TerTierModel& model, double r0, double tau);

CoverageResult ter_coverage(const TerTierModel& model, double tau);
std::vector<CoverageResult> ter_coverage(const TerTierModel& model, std::span<const double> taus);

}  // namespace istn
