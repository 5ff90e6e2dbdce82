#include "montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <thread>

namespace istn {
namespace {

constexpr std::uint64_t kSatStream = 1;
constexpr std::uint64_t kTerStream = 2;
constexpr double kRayleighCut = 40.0;  // in units of sigma_b

double rayleigh(double sigma, Xoshiro256& rng) { return sigma * std::sqrt(-2.0 * std::log(rng.uniform())); }

std::uint64_t poisson(double mean, Xoshiro256& rng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> d(mean);
  return d(rng);
}

// Runs `trial(index, hits)` over [0, trials) on the worker pool. Every worker
// owns a contiguous block and its own hit counters; counts are summed after.
template <class Fn>
std::vector<std::uint64_t> run_trials(std::uint64_t trials, std::size_t width, int threads, Fn trial) {
  if (trials == 0) throw DomainError("Monte Carlo needs at least one trial");
  const auto workers = static_cast<std::uint64_t>(std::min<std::uint64_t>(worker_count(threads), trials));
  std::vector<std::vector<std::uint64_t>> hits(workers, std::vector<std::uint64_t>(width, 0));
  auto block = [&](std::uint64_t w) {
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) trial(i, hits[w]);
  };
  if (workers == 1) {
    block(0);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(block, w);
    for (auto& t : pool) t.join();
  }
  std::vector<std::uint64_t> total(width, 0);
  for (const auto& h : hits)
    for (std::size_t k = 0; k < width; ++k) total[k] += h[k];
  return total;
}

void count_hits(double sinr, bool server, std::span<const double> taus, std::vector<std::uint64_t>& hits,
                std::size_t offset = 0) {
  if (!server) return;
  for (std::size_t t = 0; t < taus.size(); ++t)
    if (sinr > taus[t]) ++hits[offset + t];
}

FadingSpec serving_spec(const SatTierModel& m, const McOptions& opt) {
  if (opt.exact_sr) return FadingSpec::exact_sr(m.sr);
  GammaParams g = m.interferer_fading;
  if (opt.round_serving_shape) g.shape = m.serving_shape;
  return FadingSpec::gamma(g);
}

FadingSpec interferer_spec(const SatTierModel& m, const McOptions& opt) {
  return opt.exact_sr ? FadingSpec::exact_sr(m.sr) : FadingSpec::gamma(m.interferer_fading);
}

bool sat_link_los(const SatTierModel& m, double psi, const McOptions& opt, Xoshiro256& rng) {
  if (opt.sat_los == SatLosMode::ExplicitPath) return path_blockage_trial(m.blockage, m.geometry, psi, rng);
  return rng.uniform() < sat_los_probability(m.blockage, m.geometry, psi);
}

std::vector<double> los_satellites(const SatTierModel& m, const McOptions& opt, Xoshiro256& rng) {
  auto psis = sample_constellation(m, rng);
  std::vector<double> los;
  los.reserve(psis.size());
  for (double psi : psis)
    if (sat_link_los(m, psi, opt, rng)) los.push_back(psi);
  return los;
}

struct SinrDraw {
  bool server = false;
  double sinr = 0.0;
  double serving = 0.0;
};

SinrDraw draw_sat(const SatTierModel& m, const McOptions& opt, Xoshiro256& rng) {
  const auto los = los_satellites(m, opt, rng);
  if (los.empty()) return {};
  const auto nearest = std::min_element(los.begin(), los.end()) - los.begin();
  FadingSampler serve(serving_spec(m, opt));
  FadingSampler interfere(interferer_spec(m, opt));
  double signal = 0.0;
  double interference = 0.0;
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(los.size()); ++i) {
    const double path = std::pow(slant_distance(m.geometry, los[i]), -m.alpha);
    if (i == nearest)
      signal = serve(rng) * m.serving_gain() * path;
    else
      interference += interfere(rng) * m.interferer_gain() * path;
  }
  return {true, signal / (interference + m.noise), los[nearest]};
}

SinrDraw draw_ter(const TerTierModel& m, const McOptions& opt, double r_sim, double tail, Xoshiro256& rng) {
  const auto n = poisson(std::numbers::pi * m.lambda_t * r_sim * r_sim, rng);
  if (n == 0) return {};
  std::vector<double> radii(n);
  for (auto& r : radii) r = r_sim * std::sqrt(rng.uniform());
  const auto nearest = std::min_element(radii.begin(), radii.end()) - radii.begin();
  const double r0 = radii[nearest];
  const bool serving_los = opt.ter_los == TerLosMode::Geometric
                               ? planar_boolean_los_trial(m.blockage, r0, m.blockage.tbs_height, rng)
                               : rng.uniform() < ter_los_probability(m.blockage, r0);
  FadingSampler los_fade(FadingSpec::nakagami(m.nakagami_m));
  FadingSampler nlos_fade(FadingSpec::rayleigh());
  const double signal = serving_los ? los_fade(rng) * m.serving_gain() * std::pow(r0, -m.alpha_los)
                                    : nlos_fade(rng) * m.serving_gain() * std::pow(r0, -m.alpha_nlos);
  double interference = tail;
  if (m.gain_side > 0.0) {
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      if (i == nearest) continue;
      const double r = radii[i];
      if (rng.uniform() < ter_los_probability(m.blockage, r))
        interference += los_fade(rng) * m.interferer_gain() * std::pow(r, -m.alpha_los);
      else
        interference += nlos_fade(rng) * m.interferer_gain() * std::pow(r, -m.alpha_nlos);
    }
  }
  return {true, signal / (interference + m.noise), r0};
}

double resolve_r_sim(const TerTierModel& m, const McOptions& opt) {
  if (opt.r_sim > 0.0) return opt.r_sim;
  return default_r_sim(m);
}

double resolve_tail(const TerTierModel& m, const McOptions& opt, double r_sim) {
  return opt.tail_compensation ? ter_tail_interference(m, r_sim) : 0.0;
}

}  // namespace

McEstimate make_estimate(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed) {
  McEstimate e;
  e.trials = trials;
  e.seed = seed;
  e.mean = static_cast<double>(hits) / static_cast<double>(trials);
  e.half_width_95 = 1.96 * std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials));
  return e;
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ISTN_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = requested > 0 ? std::min(requested, cap) : cap;
  }
  return std::max(n, 1);
}

std::vector<double> sample_constellation(const SatTierModel& m, Xoshiro256& rng) {
  const double rs = m.geometry.r_shell();
  const double mean = m.lambda_s * 2.0 * std::numbers::pi * rs * m.geometry.altitude();
  const auto n = poisson(mean, rng);
  std::vector<double> psis(n);
  const double span = 1.0 - std::cos(m.geometry.psi_max());
  for (auto& psi : psis) psi = std::min(std::acos(1.0 - rng.uniform() * span), m.geometry.psi_max());
  return psis;
}

bool path_blockage_trial(const BlockageModel& b, const SatGeometry& g, double psi, Xoshiro256& rng) {
  const double mean = b.beta * g.r_earth() * psi + b.p;
  if (!(mean > 0.0)) return true;
  if (psi < kZenithAngle) return poisson(mean, rng) == 0;
  // Blockages past the point where the threshold height reaches 40 sigma
  // cannot cut the ray; sample only the part of the track before it.
  const double cut_height = kRayleighCut * b.sigma_b;
  double cut = psi;
  if (threshold_height(g, psi, psi) > cut_height) {
    double lo = 0.0;
    double hi = psi;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (threshold_height(g, mid, psi) > cut_height ? hi : lo) = mid;
    }
    cut = hi;
  }
  const auto k = poisson(mean * cut / psi, rng);
  bool los = true;
  for (std::uint64_t i = 0; i < k; ++i) {
    const double psi_b = cut * rng.uniform();
    const double h = rayleigh(b.sigma_b, rng);
    if (h > threshold_height(g, psi_b, psi)) los = false;
  }
  return los;
}

bool planar_boolean_los_trial(const BlockageModel& f, double r, double h_tbs, Xoshiro256& rng) {
  if (!(r >= 0.0)) throw DomainError("link length must be non-negative");
  const double half_len = 0.5 * f.mean_len;
  const double half_wid = 0.5 * f.mean_wid;
  const double reach = std::hypot(half_len, half_wid);
  if (!(f.lambda_b > 0.0) || !(reach > 0.0)) return true;
  // Any rectangle touching the segment has its center within `reach` of it.
  const double box_x = r + 2.0 * reach;
  const double box_y = 2.0 * reach;
  const auto n = poisson(f.lambda_b * box_x * box_y, rng);
  bool los = true;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double cx = -reach + box_x * rng.uniform();
    const double cy = -reach + box_y * rng.uniform();
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const double h = rayleigh(f.sigma_b, rng);
    if (!los) continue;
    // Segment (0,0)->(r,0) in the rectangle frame, then Liang-Barsky clipping.
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double x0 = -cx * c - cy * s;
    const double y0 = cx * s - cy * c;
    const double dx = r * c;
    const double dy = -r * s;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {x0 + half_len, half_len - x0, y0 + half_wid, half_wid - y0};
    double t0 = 0.0;
    double t1 = 1.0;
    bool hit = true;
    for (int k = 0; k < 4 && hit; ++k) {
      if (p[k] == 0.0) {
        if (q[k] < 0.0) hit = false;
      } else {
        const double t = q[k] / p[k];
        if (p[k] < 0.0)
          t0 = std::max(t0, t);
        else
          t1 = std::min(t1, t);
        if (t0 > t1) hit = false;
      }
    }
    if (hit && h > t0 * h_tbs) los = false;
  }
  return los;
}

double default_r_sim(const TerTierModel& m) {
  if (!(m.lambda_t > 0.0)) throw DomainError("TBS density must be positive");
  return 10.0 / std::sqrt(m.lambda_t);
}

double ter_tail_interference(const TerTierModel& m, double r_sim) {
  if (m.lambda_t == 0.0 || m.gain_side == 0.0) return 0.0;
  auto integrand = [&](double x) {
    const double p = ter_los_probability(m.blockage, x);
    return x * (p * std::pow(x, -m.alpha_los) + (1.0 - p) * std::pow(x, -m.alpha_nlos));
  };
  QuadratureSpec spec;
  spec.abs_tol = 0.0;
  spec.scale = r_sim;
  const auto q = integrate(integrand, r_sim, std::numeric_limits<double>::infinity(), spec);
  return 2.0 * std::numbers::pi * m.lambda_t * m.interferer_gain() * q.value;
}

TrialOutcome sat_trial(const SatTierModel& m, double tau, const McOptions& opt, Xoshiro256& rng) {
  const auto d = draw_sat(m, opt, rng);
  return {d.server && d.sinr > tau, d.sinr, d.serving, d.server};
}

TrialOutcome ter_trial(const TerTierModel& m, double tau, const McOptions& opt, double r_sim, double tail,
                       Xoshiro256& rng) {
  const auto d = draw_ter(m, opt, r_sim, tail, rng);
  return {d.server && d.sinr > tau, d.sinr, d.serving, d.server};
}

double sample_sat_interference(const SatTierModel& m, double psi_s, const McOptions& opt, Xoshiro256& rng) {
  const auto los = los_satellites(m, opt, rng);
  FadingSampler interfere(interferer_spec(m, opt));
  double interference = 0.0;
  for (double psi : los)
    if (psi > psi_s) interference += interfere(rng) * m.interferer_gain() * std::pow(slant_distance(m.geometry, psi), -m.alpha);
  return interference;
}

double sample_sat_sinr_at(const SatTierModel& m, double psi_s, const McOptions& opt, Xoshiro256& rng) {
  const double interference = sample_sat_interference(m, psi_s, opt, rng);
  FadingSampler serve(serving_spec(m, opt));
  const double signal = serve(rng) * m.serving_gain() * std::pow(slant_distance(m.geometry, psi_s), -m.alpha);
  return signal / (interference + m.noise);
}

double sample_ter_interference(const TerTierModel& m, double r0, double r_sim, Xoshiro256& rng) {
  if (!(r_sim > r0)) return 0.0;
  const double area = std::numbers::pi * (r_sim * r_sim - r0 * r0);
  const auto n = poisson(m.lambda_t * area, rng);
  FadingSampler los_fade(FadingSpec::nakagami(m.nakagami_m));
  FadingSampler nlos_fade(FadingSpec::rayleigh());
  double interference = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double r = std::sqrt(r0 * r0 + rng.uniform() * (r_sim * r_sim - r0 * r0));
    if (rng.uniform() < ter_los_probability(m.blockage, r))
      interference += los_fade(rng) * m.interferer_gain() * std::pow(r, -m.alpha_los);
    else
      interference += nlos_fade(rng) * m.interferer_gain() * std::pow(r, -m.alpha_nlos);
  }
  return interference;
}

std::vector<McEstimate> mc_sat_coverage(const SatTierModel& m, std::span<const double> taus, const McOptions& opt) {
  const auto hits = run_trials(opt.trials, taus.size(), opt.threads, [&](std::uint64_t i, auto& h) {
    auto rng = trial_rng(opt.seed, kSatStream, i);
    const auto d = draw_sat(m, opt, rng);
    count_hits(d.sinr, d.server, taus, h);
  });
  std::vector<McEstimate> out;
  for (auto h : hits) out.push_back(make_estimate(h, opt.trials, opt.seed));
  return out;
}

std::vector<McEstimate> mc_ter_coverage(const TerTierModel& m, std::span<const double> taus, const McOptions& opt) {
  const double r_sim = resolve_r_sim(m, opt);
  const double tail = resolve_tail(m, opt, r_sim);
  const auto hits = run_trials(opt.trials, taus.size(), opt.threads, [&](std::uint64_t i, auto& h) {
    auto rng = trial_rng(opt.seed, kTerStream, i);
    const auto d = draw_ter(m, opt, r_sim, tail, rng);
    count_hits(d.sinr, d.server, taus, h);
  });
  std::vector<McEstimate> out;
  for (auto h : hits) out.push_back(make_estimate(h, opt.trials, opt.seed));
  return out;
}

McTierSet mc_all_coverage(const SatTierModel& sat, const TerTierModel& ter, std::span<const double> taus,
                          const McOptions& opt) {
  const double r_sim = resolve_r_sim(ter, opt);
  const double tail = resolve_tail(ter, opt, r_sim);
  const std::size_t n = taus.size();
  const auto hits = run_trials(opt.trials, 3 * n, opt.threads, [&](std::uint64_t i, auto& h) {
    auto sat_rng = trial_rng(opt.seed, kSatStream, i);
    auto ter_rng = trial_rng(opt.seed, kTerStream, i);
    const auto s = draw_sat(sat, opt, sat_rng);
    const auto t = draw_ter(ter, opt, r_sim, tail, ter_rng);
    for (std::size_t k = 0; k < n; ++k) {
      const bool cs = s.server && s.sinr > taus[k];
      const bool ct = t.server && t.sinr > taus[k];
      h[k] += cs;
      h[n + k] += ct;
      h[2 * n + k] += cs || ct;
    }
  });
  McTierSet out;
  for (std::size_t k = 0; k < n; ++k) {
    out.sat.push_back(make_estimate(hits[k], opt.trials, opt.seed));
    out.ter.push_back(make_estimate(hits[n + k], opt.trials, opt.seed));
    out.istn.push_back(make_estimate(hits[2 * n + k], opt.trials, opt.seed));
  }
  return out;
}

std::vector<McEstimate> mc_istn_coverage(const SatTierModel& sat, const TerTierModel& ter, std::span<const double> taus,
                                         const McOptions& opt) {
  return mc_all_coverage(sat, ter, taus, opt).istn;
}

McEstimate mc_sat_coverage(const SatTierModel& m, double tau, const McOptions& opt) {
  const double taus[] = {tau};
  return mc_sat_coverage(m, std::span<const double>(taus), opt).front();
}

McEstimate mc_ter_coverage(const TerTierModel& m, double tau, const McOptions& opt) {
  const double taus[] = {tau};
  return mc_ter_coverage(m, std::span<const double>(taus), opt).front();
}

McEstimate mc_istn_coverage(const SatTierModel& sat, const TerTierModel& ter, double tau, const McOptions& opt) {
  const double taus[] = {tau};
  return mc_istn_coverage(sat, ter, std::span<const double>(taus), opt).front();
}

}  // namespace istn
