#pragma once

#include <span>
#include <vector>

#include "blockage.hpp"
#include "config.hpp"
#include "coverage.hpp"
#include "fading.hpp"
#include "quadrature.hpp"

namespace istn {

/// Satellite-tier parameters for the nearest-LoS-satellite association.
struct SatTierModel {
  SatGeometry geometry{6371e3, 6921e3};
  BlockageModel blockage;
  double lambda_s = 0.0;
  ShadowedRicianParams sr;
  GammaParams interferer_fading;  // unrounded (m_s, beta_s)
  int serving_shape = 1;          // rounded m_s
  double tx_power = 0.0;
  double gain_main = 0.0;
  double gain_side = 0.0;
  double alpha = 2.0;
  double noise = 0.0;
  double path_constant = 1.0;
  QuadratureSpec inner;  // interference and LoS-count integrals

  static SatTierModel from_config(const ScenarioConfig& cfg);

  double serving_gain() const { return tx_power * gain_main * path_constant; }
  double interferer_gain() const { return tx_power * gain_side * path_constant; }
};

/// Intensity of LoS satellites per unit geocentric angle.
double los_intensity(const SatTierModel& model, double psi);

/// Mean number of LoS satellites within [0, psi].
double mean_los_count(const SatTierModel& model, double psi);

/// Density of the nearest LoS satellite's angle given at least one exists.
/// Throws NumericalError when no LoS satellite can be visible.
double nearest_los_pdf(const SatTierModel& model, double psi);

/// Laplace transform of the aggregate interference of LoS satellites beyond
/// psi_s. The jet overload expands in s around s.value().
double sat_interference_laplace(const SatTierModel& model, double s, double psi_s);
Jet sat_interference_laplace(const SatTierModel& model, const Jet& s, double psi_s);

/// Laplace variable at which the serving-link Gamma CCDF is expanded.
double serving_laplace_point(const SatTierModel& model, double psi_s, double tau);

/// P(SINR > tau | serving satellite at psi_s).
double sat_conditional_coverage(const SatTierModel& model, double psi_s, double tau);

/// Coverage including the at-least-one-LoS-satellite event.
CoverageResult sat_coverage(const SatTierModel& model, double tau);
std::vector<CoverageResult> sat_coverage(const SatTierModel& model, std::span<const double> taus);

}  // namespace istn
