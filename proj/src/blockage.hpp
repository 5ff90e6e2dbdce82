#pragma once

#include <memory>
#include <vector>

#include "geometry.hpp"

namespace istn {

/// Mean blockage count on a planar segment of length R is beta * R + p.
struct BlockageParams {
  double beta = 0.0;  // per meter
  double p = 0.0;
};

BlockageParams derive_params(double lambda_b, double mean_len, double mean_wid);

/// Fraction of Rayleigh(sigma_b) blockages that cut a ground-to-mast ray of
/// height h_tbs, averaged along the link.
double ter_eta(double sigma_b, double h_tbs);

/// Curvature scaling factor tabulated on [0, psi_max] and interpolated with a
/// monotone (Fritsch-Carlson) cubic in log space. Node 0 holds the right-hand
/// limit; eta(psi < kZenithAngle) returns exactly 1.
class CurvatureTable {
 public:
  static constexpr int kDefaultNodes = 2048;

  CurvatureTable(const SatGeometry& g, double sigma_b, int nodes = kDefaultNodes);

  /// Shared instance for (geometry, sigma_b); tables are immutable.
  static std::shared_ptr<const CurvatureTable> cached(const SatGeometry& g, double sigma_b);

  double eta(double psi) const;
  double sigma_b() const { return sigma_b_; }
  const SatGeometry& geometry() const { return geometry_; }

 private:
  SatGeometry geometry_;
  double sigma_b_;
  double step_;
  std::vector<double> log_eta_;
  std::vector<double> slope_;
};

/// Boolean blockage statistics shared by both tiers.
struct BlockageModel {
  double lambda_b = 0.0;
  double mean_len = 0.0;
  double mean_wid = 0.0;
  double sigma_b = 0.0;
  double tbs_height = 0.0;
  double beta = 0.0;
  double p = 0.0;
  double eta_ter = 1.0;
  std::shared_ptr<const CurvatureTable> curvature;  // null: evaluate directly

  static BlockageModel create(double lambda_b, double mean_len, double mean_wid, double sigma_b,
                              double tbs_height, const SatGeometry* geometry = nullptr);
};

/// LoS probability of a satellite at geocentric angle psi (0 past the horizon).
double sat_los_probability(const BlockageModel& model, const SatGeometry& g, double psi);

double ter_los_probability(const BlockageModel& model, double r);
double ter_nlos_probability(const BlockageModel& model, double r);

}  // namespace istn
