#include "analytic_sat.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>

#include "kernels.hpp"

namespace istn {
namespace {

constexpr double kProbabilitySlack = 1e-9;
constexpr int kBaseIntervals = 256;
constexpr int kMaxIntervals = 8192;
constexpr double kResolutionAgreement = 1e-4;

double clamp_probability(double v, const char* what) {
  if (!(v >= -kProbabilitySlack && v <= 1.0 + kProbabilitySlack))
    throw NumericalError(std::string(what) + " left [0, 1]: " + std::to_string(v));
  return std::clamp(v, 0.0, 1.0);
}

void check_laplace(const Jet& l) {
  if (!(l.value() >= 0.0 && l.value() <= 1.0 + 1e-12)) throw NumericalError("interference Laplace transform left [0, 1]");
  if (l.order() >= 1 && l[1] > 1e-12 * l.value()) throw NumericalError("interference Laplace transform is increasing");
  if (l.order() >= 2 && l[2] < -1e-12 * l.value()) throw NumericalError("interference Laplace transform is concave");
}

// Exponent of the interference Laplace transform as a jet in s.
Jet interference_exponent(const SatTierModel& m, double s0, double psi_s, int order) {
  const double psi_max = m.geometry.psi_max();
  if (psi_s >= psi_max || m.lambda_s == 0.0) return Jet(order);
  const double gain = m.interferer_fading.scale * m.interferer_gain();
  const double shape = m.interferer_fading.shape;
  auto integrand = [&](double psi) {
    const double intensity = los_intensity(m, psi);
    if (intensity == 0.0) return Jet(order);
    const double c = gain * std::pow(slant_distance(m.geometry, psi), -m.alpha);
    Jet k = detail::pgfl_kernel(s0, c, shape, order);
    k *= intensity;
    return k;
  };
  return integrate_jet(integrand, psi_s, psi_max, m.inner, order).value;
}

struct OuterNodes {
  std::vector<double> psi;
  std::vector<double> weight;  // LoS intensity * exp(-mu): the unnormalized nearest-LoS density
};

OuterNodes outer_nodes(const SatTierModel& m, int intervals) {
  OuterNodes nodes;
  const double psi_max = m.geometry.psi_max();
  const double h = psi_max / intervals;
  nodes.psi.resize(intervals + 1);
  nodes.weight.resize(intervals + 1);
  double mu = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double psi = i == intervals ? psi_max : i * h;
    if (i > 0) mu += integrate([&](double x) { return los_intensity(m, x); }, nodes.psi[i - 1], psi, m.inner).value;
    nodes.psi[i] = psi;
    nodes.weight[i] = los_intensity(m, psi) * std::exp(-mu);
  }
  return nodes;
}

// Composite Simpson over nodes with stride `stride`.
double simpson(const std::vector<double>& f, double h, int stride) {
  const int n = static_cast<int>(f.size()) - 1;
  double sum = f[0] + f[n];
  for (int i = stride, k = 1; i < n; i += stride, ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f[i];
  return sum * h * stride / 3.0;
}

}  // namespace

SatTierModel SatTierModel::from_config(const ScenarioConfig& cfg) {
  SatTierModel m;
  m.geometry = SatGeometry(cfg.earth_radius, cfg.shell_radius());
  m.blockage = BlockageModel::create(cfg.blockage_density, cfg.mean_len, cfg.mean_wid, cfg.sigma_b(),
                                     cfg.tbs_height, &m.geometry);
  m.lambda_s = cfg.sat_density;
  m.sr = cfg.sr;
  m.interferer_fading = gamma_approx_sr(cfg.sr);
  m.serving_shape = rounded_shape(m.interferer_fading.shape);
  m.tx_power = cfg.tx_power_sat;
  m.gain_main = cfg.gain_main_sat;
  m.gain_side = cfg.gain_side_sat;
  m.alpha = cfg.alpha_sat;
  m.noise = cfg.noise_sat;
  m.path_constant = cfg.path_constant_sat();
  return m;
}

double los_intensity(const SatTierModel& m, double psi) {
  const double rs = m.geometry.r_shell();
  return 2.0 * std::numbers::pi * rs * rs * std::sin(psi) * m.lambda_s *
         sat_los_probability(m.blockage, m.geometry, psi);
}

double mean_los_count(const SatTierModel& m, double psi) {
  if (!(psi >= 0.0) || psi > m.geometry.psi_max() * (1.0 + 1e-12)) throw DomainError("psi outside [0, psi_max]");
  psi = std::min(psi, m.geometry.psi_max());
  return integrate([&](double x) { return los_intensity(m, x); }, 0.0, psi, m.inner).value;
}

double nearest_los_pdf(const SatTierModel& m, double psi) {
  const double mu_max = mean_los_count(m, m.geometry.psi_max());
  if (!(mu_max > 0.0)) throw NumericalError("no visible LoS satellites: the nearest-LoS law is undefined");
  if (psi > m.geometry.psi_max()) return 0.0;
  return los_intensity(m, psi) * std::exp(-mean_los_count(m, psi)) / -std::expm1(-mu_max);
}

double sat_interference_laplace(const SatTierModel& m, double s, double psi_s) {
  return sat_interference_laplace(m, Jet::constant(s, 0), psi_s).value();
}

Jet sat_interference_laplace(const SatTierModel& m, const Jet& s, double psi_s) {
  if (!(s.value() >= 0.0)) throw DomainError("Laplace variable must be non-negative");
  if (!(psi_s >= 0.0) || psi_s > m.geometry.psi_max() * (1.0 + 1e-12)) throw DomainError("psi_s outside [0, psi_max]");
  const Jet exponent = interference_exponent(m, s.value(), std::min(psi_s, m.geometry.psi_max()), s.order());
  // The kernel jet is in powers of (s - s0); compose with the caller's series.
  Jet composed(s.order());
  Jet ds = s - s.value();
  Jet power = Jet::constant(1.0, s.order());
  for (int j = 0; j <= s.order(); ++j) {
    composed += power * exponent[j];
    power = power * ds;
  }
  Jet l = exp(-composed);
  check_laplace(exp(-exponent));
  return l;
}

double serving_laplace_point(const SatTierModel& m, double psi_s, double tau) {
  return tau * std::pow(slant_distance(m.geometry, psi_s), m.alpha) / (m.serving_gain() * m.interferer_fading.scale);
}

double sat_conditional_coverage(const SatTierModel& m, double psi_s, double tau) {
  if (!(tau > 0.0)) throw DomainError("SINR threshold must be positive");
  const int n = m.serving_shape - 1;
  const double s0 = serving_laplace_point(m, psi_s, tau);
  const Jet exponent = interference_exponent(m, s0, psi_s, n);
  const Jet l = exp(-exponent);
  check_laplace(l);
  const Jet f = l * detail::noise_factor(s0, m.noise, n);
  return clamp_probability(alternating_taylor_sum(f, s0, n), "conditional satellite coverage");
}

std::vector<CoverageResult> sat_coverage(const SatTierModel& m, std::span<const double> taus) {
  std::vector<CoverageResult> out(taus.size());
  if (m.lambda_s == 0.0) return out;
  const double psi_max = m.geometry.psi_max();
  // Each tau is refined independently; nodes are shared between taus at a level.
  std::vector<bool> done(taus.size(), false);
  std::vector<double> coarse(taus.size(), 0.0);
  for (int intervals = kBaseIntervals; intervals <= kMaxIntervals; intervals *= 2) {
    const auto nodes = outer_nodes(m, intervals);
    const double h = psi_max / intervals;
    for (std::size_t t = 0; t < taus.size(); ++t) {
      if (done[t]) continue;
      std::vector<double> f(nodes.psi.size());
      for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = nodes.weight[i] == 0.0 ? 0.0 : nodes.weight[i] * sat_conditional_coverage(m, nodes.psi[i], taus[t]);
      const double fine = simpson(f, h, 1);
      const double half = intervals == kBaseIntervals ? simpson(f, h, 2) : coarse[t];
      coarse[t] = fine;
      if (std::abs(fine - half) <= kResolutionAgreement) {
        out[t].coverage = clamp_probability(fine, "satellite coverage");
        out[t].quad_err = std::abs(fine - half) / 15.0;
        done[t] = true;
      }
    }
    if (std::all_of(done.begin(), done.end(), [](bool d) { return d; })) return out;
  }
  throw NumericalError("satellite coverage outer integral did not settle by 8192 intervals");
}

CoverageResult sat_coverage(const SatTierModel& m, double tau) {
  const double taus[] = {tau};
  return sat_coverage(m, std::span<const double>(taus)).front();
}

}  // namespace istn
