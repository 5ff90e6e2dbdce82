#include "blockage.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace istn {

BlockageParams derive_params(double lambda_b, double mean_len, double mean_wid) {
  if (!(lambda_b >= 0.0) || !(mean_len >= 0.0) || !(mean_wid >= 0.0))
    throw DomainError("blockage parameters must be non-negative");
  return {2.0 * lambda_b * (mean_len + mean_wid) / std::numbers::pi, lambda_b * mean_len * mean_wid};
}

double ter_eta(double sigma_b, double h_tbs) {
  if (!(sigma_b > 0.0) || !(h_tbs > 0.0)) throw DomainError("ter_eta needs positive sigma_b and h_tbs");
  const double x = h_tbs / (std::numbers::sqrt2 * sigma_b);
  if (x < 1e-6) return 1.0 - x * x / 3.0;
  return 0.5 * std::sqrt(std::numbers::pi) * std::erf(x) / x;
}

CurvatureTable::CurvatureTable(const SatGeometry& g, double sigma_b, int nodes)
    : geometry_(g), sigma_b_(sigma_b) {
  if (nodes < 3) throw DomainError("curvature table needs at least 3 nodes");
  step_ = g.psi_max() / (nodes - 1);
  log_eta_.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double psi = i == nodes - 1 ? g.psi_max() : i * step_;
    log_eta_[i] = std::log(std::max(curvature_scaling_average(g, psi, sigma_b, 1e-14), 1e-300));
  }
  // Fritsch-Carlson slopes.
  const int n = nodes;
  std::vector<double> delta(n - 1);
  for (int i = 0; i + 1 < n; ++i) delta[i] = (log_eta_[i + 1] - log_eta_[i]) / step_;
  slope_.assign(n, 0.0);
  slope_[0] = delta[0];
  slope_[n - 1] = delta[n - 2];
  for (int i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      // Harmonic mean of neighbouring secants (equal spacing).
      slope_[i] = 2.0 / (1.0 / delta[i - 1] + 1.0 / delta[i]);
    }
  }
}

std::shared_ptr<const CurvatureTable> CurvatureTable::cached(const SatGeometry& g, double sigma_b) {
  static std::mutex mutex;
  static std::map<std::tuple<double, double, double>, std::shared_ptr<const CurvatureTable>> cache;
  const auto key = std::make_tuple(g.r_earth(), g.r_shell(), sigma_b);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const CurvatureTable>(g, sigma_b);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

double CurvatureTable::eta(double psi) const {
  if (psi < kZenithAngle) return 1.0;
  const int n = static_cast<int>(log_eta_.size());
  const double pos = std::min(psi / step_, static_cast<double>(n - 1));
  const int i = std::min(static_cast<int>(pos), n - 2);
  const double t = pos - i;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  const double v = h00 * log_eta_[i] + h10 * step_ * slope_[i] + h01 * log_eta_[i + 1] + h11 * step_ * slope_[i + 1];
  return std::exp(v);
}

BlockageModel BlockageModel::create(double lambda_b, double mean_len, double mean_wid, double sigma_b,
                                    double tbs_height, const SatGeometry* geometry) {
  BlockageModel m;
  m.lambda_b = lambda_b;
  m.mean_len = mean_len;
  m.mean_wid = mean_wid;
  m.sigma_b = sigma_b;
  m.tbs_height = tbs_height;
  const auto bp = derive_params(lambda_b, mean_len, mean_wid);
  m.beta = bp.beta;
  m.p = bp.p;
  m.eta_ter = ter_eta(sigma_b, tbs_height);
  if (geometry) m.curvature = CurvatureTable::cached(*geometry, sigma_b);
  return m;
}

double sat_los_probability(const BlockageModel& model, const SatGeometry& g, double psi) {
  if (!(psi >= 0.0)) throw DomainError("geocentric angle must be non-negative");
  if (psi > g.psi_max() * (1.0 + 1e-12)) return 0.0;
  psi = std::min(psi, g.psi_max());
  const double mean = model.beta * g.r_earth() * psi + model.p;
  if (mean == 0.0) return 1.0;
  const double eta = model.curvature ? model.curvature->eta(psi) : curvature_scaling(g, psi, model.sigma_b);
  return std::exp(-eta * mean);
}

double ter_los_probability(const BlockageModel& model, double r) {
  if (!(r >= 0.0)) throw DomainError("link distance must be non-negative");
  return std::exp(-model.eta_ter * (model.beta * r + model.p));
}

double ter_nlos_probability(const BlockageModel& model, double r) {
  return 1.0 - ter_los_probability(model, r);
}

}  // namespace istn
