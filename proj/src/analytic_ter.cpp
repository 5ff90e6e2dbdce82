#include "analytic_ter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kernels.hpp"

namespace istn {
namespace {

constexpr double kProbabilitySlack = 1e-9;
constexpr double kTailMass = 1e-9;

double clamp_probability(double v, const char* what) {
  if (!(v >= -kProbabilitySlack && v <= 1.0 + kProbabilitySlack))
    throw NumericalError(std::string(what) + " left [0, 1]: " + std::to_string(v));
  return std::clamp(v, 0.0, 1.0);
}

Jet interference_exponent(const TerTierModel& m, double s0, double r0, int order) {
  if (m.lambda_t == 0.0 || m.gain_side == 0.0 || (s0 == 0.0 && order == 0)) return Jet(order);
  const double g = m.interferer_gain();
  const double shape = m.nakagami_m;
  auto integrand = [&](double x) {
    const double p_los = ter_los_probability(m.blockage, x);
    const double c_los = g * std::pow(x, -m.alpha_los) / shape;
    const double c_nlos = g * std::pow(x, -m.alpha_nlos);
    Jet k = detail::pgfl_kernel(s0, c_los, shape, order) * p_los;
    k += detail::pgfl_kernel(s0, c_nlos, 1.0, order) * (1.0 - p_los);
    k *= 2.0 * std::numbers::pi * m.lambda_t * x;
    return k;
  };
  QuadratureSpec spec = m.inner;
  spec.scale = r0 > 0.0 ? r0 : 1.0;
  return integrate_jet(integrand, r0, std::numeric_limits<double>::infinity(), spec, order).value;
}

Jet laplace_at(const TerTierModel& m, double s0, double r0, int order) {
  const Jet l = exp(-interference_exponent(m, s0, r0, order));
  if (!(l.value() >= 0.0 && l.value() <= 1.0 + 1e-12)) throw NumericalError("interference Laplace transform left [0, 1]");
  return l;
}

}  // namespace

TerTierModel TerTierModel::from_config(const ScenarioConfig& cfg, bool strict_sum) {
  TerTierModel m;
  m.lambda_t = cfg.tbs_density;
  m.blockage = BlockageModel::create(cfg.blockage_density, cfg.mean_len, cfg.mean_wid, cfg.sigma_b(), cfg.tbs_height);
  m.tx_power = cfg.tx_power_tbs;
  m.gain_main = cfg.gain_main_tbs;
  m.gain_side = cfg.gain_side_tbs;
  m.alpha_los = cfg.alpha_los;
  m.alpha_nlos = cfg.alpha_nlos;
  m.nakagami_m = cfg.nakagami_m;
  m.noise = cfg.noise_ter;
  m.path_constant = cfg.path_constant_ter();
  m.strict_sum = strict_sum;
  return m;
}

double TerTierModel::r0_max() const {
  if (!(lambda_t > 0.0)) throw DomainError("TBS density must be positive");
  return std::sqrt(std::log(1.0 / kTailMass) / (std::numbers::pi * lambda_t));
}

double nearest_tbs_pdf(double lambda_t, double r0) {
  if (!(lambda_t > 0.0)) throw DomainError("TBS density must be positive");
  if (!(r0 >= 0.0)) throw DomainError("distance must be non-negative");
  const double a = std::numbers::pi * lambda_t;
  return 2.0 * a * r0 * std::exp(-a * r0 * r0);
}

double ter_interference_laplace(const TerTierModel& m, double s, double r0) {
  return ter_interference_laplace(m, Jet::constant(s, 0), r0).value();
}

Jet ter_interference_laplace(const TerTierModel& m, const Jet& s, double r0) {
  if (!(s.value() >= 0.0)) throw DomainError("Laplace variable must be non-negative");
  if (!(r0 >= 0.0)) throw DomainError("distance must be non-negative");
  const Jet exponent = interference_exponent(m, s.value(), r0, s.order());
  Jet composed(s.order());
  const Jet ds = s - s.value();
  Jet power = Jet::constant(1.0, s.order());
  for (int j = 0; j <= s.order(); ++j) {
    composed += power * exponent[j];
    power = power * ds;
  }
  return exp(-composed);
}

double ter_branch_coverage(const TerTierModel& m, double r0, double tau, int shape, double alpha) {
  if (!(tau > 0.0)) throw DomainError("SINR threshold must be positive");
  if (shape < 1 || shape - 1 > Jet::kMaxOrder) throw DomainError("serving shape out of range");
  const int n = shape - 1;
  const double s0 = shape * std::pow(r0, alpha) * tau / m.serving_gain();
  const Jet f = laplace_at(m, s0, r0, n) * detail::noise_factor(s0, m.noise, n);
  const double weight = m.strict_sum ? 1.0 : s0;
  return clamp_probability(alternating_taylor_sum(f, weight, n), "conditional terrestrial coverage");
}

double ter_conditional_coverage(const TerTierModel& m, double r0, double tau) {
  const double p_los = ter_los_probability(m.blockage, r0);
  double c = 0.0;
  if (p_los > 0.0) c += p_los * ter_branch_coverage(m, r0, tau, m.nakagami_m, m.alpha_los);
  if (p_los < 1.0) c += (1.0 - p_los) * ter_branch_coverage(m, r0, tau, 1, m.alpha_nlos);
  return c;
}

std::vector<CoverageResult> ter_coverage(const TerTierModel& m, std::span<const double> taus) {
  std::vector<CoverageResult> out(taus.size());
  if (m.lambda_t == 0.0) return out;
  const double r_max = m.r0_max();
  for (std::size_t t = 0; t < taus.size(); ++t) {
    const double tau = taus[t];
    auto integrand = [&](double r0) { return nearest_tbs_pdf(m.lambda_t, r0) * ter_conditional_coverage(m, r0, tau); };
    const auto q = integrate(integrand, 0.0, r_max, m.outer);
    out[t].coverage = clamp_probability(q.value, "terrestrial coverage");
    out[t].quad_err = q.error;
  }
  return out;
}

CoverageResult ter_coverage(const TerTierModel& m, double tau) {
  const double taus[] = {tau};
  return ter_coverage(m, std::span<const double>(taus)).front();
}

}  // namespace istn
