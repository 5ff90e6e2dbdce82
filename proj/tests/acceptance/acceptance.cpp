// Acceptance run: one PASS/FAIL line per criterion, details indented below.

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "montecarlo.hpp"
#include "runner.hpp"
#include "support.hpp"

using namespace istn;
using namespace istn::test;
using boost::math::quadrature::gauss_kronrod;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTrials = 200000;

struct Verdict {
  bool pass = true;
  std::vector<std::string> details;

  void note(const std::string& s) { details.push_back(s); }
  void require(bool ok, const std::string& s) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + s);
  }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Analytic rows of every preset, filled by criterion 1 and reused later.
std::map<std::string, std::vector<ResultRow>> g_rows;

std::vector<ResultRow> select(const std::vector<ResultRow>& rows, const std::string& curve, Tier tier, Method method) {
  std::vector<ResultRow> out;
  for (const auto& r : rows)
    if (r.curve == curve && r.tier == tier && r.method == method) out.push_back(r);
  return out;
}

struct PairStats {
  std::size_t failed = 0;
  std::size_t total = 0;
  std::map<Tier, double> max_diff;
};

PairStats summarize(const std::vector<VerifyRow>& pairs) {
  PairStats s;
  for (const auto& v : pairs) {
    ++s.total;
    s.failed += !v.pass();
    s.max_diff[v.tier] = std::max(s.max_diff[v.tier], std::abs(v.analytic - v.mc));
  }
  return s;
}

std::string describe(const PairStats& s) {
  std::string out = std::to_string(s.total - s.failed) + "/" + std::to_string(s.total) + " pairs within tolerance;";
  for (const auto& [tier, d] : s.max_diff) out += " max |diff| " + std::string(to_string(tier)) + " " + num(d, 3);
  return out;
}

Verdict criterion1() {
  Verdict v;
  for (const auto& name : preset_names()) {
    const auto start = std::chrono::steady_clock::now();
    const auto preset = figure_preset(name);
    RunOptions opt;
    opt.trials = kTrials;
    opt.seed = 1;
    SweepSpec sweep = preset.sweep;
    sweep.methods = {Method::Analytic, Method::MonteCarlo};
    std::vector<ResultRow> rows;
    for (const auto& c : preset.curves) {
      auto r = evaluate_curve(c.label, c.scenario, sweep, opt);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    g_rows[name] = rows;
    const auto stats = summarize(pair_rows(rows, opt.tol_tier, opt.tol_istn));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(stats.failed == 0, name + ": " + describe(stats) + " (" + num(secs, 3) + " s)");

    // Same comparison with the serving satellite fade drawn at the rounded
    // shape used by the analytic expression.
    if (std::find(sweep.tiers.begin(), sweep.tiers.end(), Tier::Sat) == sweep.tiers.end()) continue;
    RunOptions rounded = opt;
    rounded.mc.round_serving_shape = true;
    SweepSpec mc_only = sweep;
    mc_only.methods = {Method::MonteCarlo};
    mc_only.tiers.erase(std::remove(mc_only.tiers.begin(), mc_only.tiers.end(), Tier::Ter), mc_only.tiers.end());
    std::vector<ResultRow> mixed;
    for (const auto& r : rows)
      if (r.method == Method::Analytic) mixed.push_back(r);
    for (const auto& c : preset.curves) {
      auto r = evaluate_curve(c.label, c.scenario, mc_only, rounded);
      mixed.insert(mixed.end(), r.begin(), r.end());
    }
    v.note("     " + name + " with rounded serving shape in MC: " +
           describe(summarize(pair_rows(mixed, opt.tol_tier, opt.tol_istn))));
  }
  return v;
}

// Threshold height in a cancellation-free form of the ray-slope expression.
double oracle_threshold(const SatGeometry& g, double psi_b, double psi_s) {
  const double t = (g.r_shell() * std::cos(psi_s) - g.r_earth()) / (g.r_shell() * std::sin(psi_s));
  const double half = std::sin(0.5 * psi_b);
  return g.r_earth() * (2 * half * half + std::sin(psi_b) * t) / (std::cos(psi_b) - std::sin(psi_b) * t);
}

double oracle_eta(const SatGeometry& g, double psi_s, double sigma) {
  // Past 40 sigma the integrand is below exp(-800).
  double cut = psi_s;
  if (oracle_threshold(g, psi_s, psi_s) > 40 * sigma) {
    double lo = 0.0, hi = psi_s;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (oracle_threshold(g, mid, psi_s) > 40 * sigma ? hi : lo) = mid;
    }
    cut = hi;
  }
  const int n = 400000;
  const double h = cut / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double hb = oracle_threshold(g, i * h, psi_s);
    sum += (i == 0 || i == n ? 1.0 : i % 2 ? 4.0 : 2.0) * std::exp(-hb * hb / (2 * sigma * sigma));
  }
  return sum * h / 3.0 / psi_s;
}

double rate(int n, std::uint64_t stream, const std::function<bool(Xoshiro256&)>& trial) {
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    auto rng = trial_rng(2024, stream, i);
    hits += trial(rng);
  }
  return double(hits) / n;
}

double chi_square_p(const SatTierModel& m, int samples) {
  const double psi_max = m.geometry.psi_max();
  const int bins = 50;
  std::vector<double> observed(bins, 0.0);
  int found = 0;
  for (int i = 0; i < samples; ++i) {
    auto rng = trial_rng(77, 5, i);
    double nearest = 10.0;
    for (double psi : sample_constellation(m, rng))
      if (rng.uniform() < sat_los_probability(m.blockage, m.geometry, psi)) nearest = std::min(nearest, psi);
    if (nearest > psi_max) continue;
    ++found;
    observed[std::min(bins - 1, int(nearest / psi_max * bins))] += 1.0;
  }
  auto pdf = [&](double x) { return nearest_los_pdf(m, x); };
  double stat = 0.0, obs = 0.0, expct = 0.0;
  int cells = 0;
  for (int b = 0; b < bins; ++b) {
    expct += found * gauss_kronrod<double, 31>::integrate(pdf, psi_max * b / bins, psi_max * (b + 1) / bins, 10, 1e-10);
    obs += observed[b];
    if (expct >= 5.0 || b == bins - 1) {
      stat += (obs - expct) * (obs - expct) / expct;
      ++cells;
      obs = expct = 0.0;
    }
  }
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(cells - 1), stat));
}

Verdict criterion2() {
  Verdict v;
  const auto cfg = fig4_config();
  const auto sat = SatTierModel::from_config(cfg);
  const auto ter = TerTierModel::from_config(cfg);
  const auto& g = sat.geometry;

  double worst = 0.0;
  for (double psi : {1e-3, 0.01, 0.05, 0.1, 0.2, 0.3, 0.99 * g.psi_max()})
    worst = std::max(worst, std::abs(curvature_scaling(g, psi, cfg.sigma_b()) - oracle_eta(g, psi, cfg.sigma_b())));
  v.require(worst <= 1e-8, "curvature scaling vs fixed-grid quadrature: max |diff| " + num(worst, 3));

  worst = 0.0;
  for (double psi : {1e-3, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4}) {
    const double sim = rate(100000, 1, [&](Xoshiro256& rng) { return path_blockage_trial(sat.blockage, g, psi, rng); });
    worst = std::max(worst, std::abs(sim - sat_los_probability(sat.blockage, g, psi)));
  }
  v.require(worst <= 0.01, "satellite LoS probability vs explicit path simulation: max |diff| " + num(worst, 3));

  worst = 0.0;
  for (const auto& m : {ter, TerTierModel::from_config(fig3a_config(4.5, 1000))}) {
    for (double r : {10.0, 50.0, 100.0, 200.0, 400.0}) {
      const double sim = rate(100000, 2, [&](Xoshiro256& rng) {
        return planar_boolean_los_trial(m.blockage, r, m.blockage.tbs_height, rng);
      });
      worst = std::max(worst, std::abs(sim - ter_los_probability(m.blockage, r)));
    }
  }
  v.require(worst <= 0.01, "terrestrial LoS probability vs rectangle-field simulation: max |diff| " + num(worst, 3));

  worst = 0.0;
  for (const auto& m : {sat, SatTierModel::from_config(fig2a_config(50, 20, 1e4))}) {
    auto pdf = [&](double x) { return nearest_los_pdf(m, x); };
    worst = std::max(worst, std::abs(gauss_kronrod<double, 61>::integrate(pdf, 0.0, m.geometry.psi_max(), 15, 1e-12) - 1));
  }
  v.require(worst <= 1e-6, "nearest LoS satellite density normalization: |1 - mass| " + num(worst, 3));
  worst = 0.0;
  for (double km2 : {0.385, 4.5, 29.0}) {
    auto pdf = [&](double r) { return nearest_tbs_pdf(km2 * 1e-6, r); };
    worst = std::max(worst, std::abs(gauss_kronrod<double, 61>::integrate(pdf, 0.0, std::numeric_limits<double>::infinity(),
                                                                          15, 1e-13) - 1));
  }
  v.require(worst <= 1e-6, "nearest TBS density normalization: |1 - mass| " + num(worst, 3));

  const double p = chi_square_p(sat, 100000);
  v.require(p > 0.01, "nearest LoS satellite density vs sampled histogram: chi-square p = " + num(p, 3));
  return v;
}

Verdict criterion3() {
  Verdict v;
  double worst_sat = 0.0, worst_ter = 0.0;
  auto sat = SatTierModel::from_config(fig4_config());
  sat.inner.abs_tol = 1e-14;
  sat.inner.rel_tol = 1e-13;
  for (double psi : {0.02, 0.1, 0.3})
    for (double tau_db : {-5.0, 5.0, 15.0}) {
      const double tau = db_to_linear(tau_db);
      const double s0 = serving_laplace_point(sat, psi, tau);
      auto f = [&](double s) { return std::exp(-s * sat.noise) * sat_interference_laplace(sat, s, psi); };
      for (int shape = 1; shape <= 4; ++shape) {
        auto m = sat;
        m.serving_shape = shape;
        const double jet = sat_conditional_coverage(m, psi, tau);
        const double fd = richardson_taylor_sum(f, s0, shape, s0, shape <= 3 ? 1e-4 : 1e-3);
        worst_sat = std::max(worst_sat, std::abs(jet - fd) / std::max(std::abs(fd), 1e-300));
      }
    }
  for (bool strict : {false, true}) {
    auto ter = TerTierModel::from_config(fig4_config(), strict);
    ter.inner.abs_tol = 1e-15;
    ter.inner.rel_tol = 1e-13;
    for (double r0 : {30.0, 150.0, 400.0})
      for (double tau_db : {-5.0, 5.0, 15.0}) {
        const double tau = db_to_linear(tau_db);
        auto f = [&](double s) { return std::exp(-s * ter.noise) * ter_interference_laplace(ter, s, r0); };
        for (int shape = 1; shape <= 4; ++shape) {
          const double s0 = shape * std::pow(r0, ter.alpha_los) * tau / ter.serving_gain();
          const double jet = ter_branch_coverage(ter, r0, tau, shape, ter.alpha_los);
          const double fd = richardson_taylor_sum(f, s0, shape, strict ? 1.0 : s0, shape <= 3 ? 1e-4 : 1e-3);
          worst_ter = std::max(worst_ter, std::abs(jet - fd) / std::max(std::abs(fd), 1e-300));
        }
      }
  }
  v.require(worst_sat <= 1e-5, "satellite finite sum, shapes 1..4: max relative diff " + num(worst_sat, 3));
  v.require(worst_ter <= 1e-5, "terrestrial finite sum, shapes 1..4, both sum modes: max relative diff " + num(worst_ter, 3));
  return v;
}

std::size_t argmax(const std::vector<ResultRow>& rows) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].result.coverage > rows[best].result.coverage) best = i;
  return best;
}

Verdict criterion4() {
  Verdict v;
  const auto& rows = g_rows.at("fig2a");
  std::map<std::pair<int, int>, double> peak;  // (h, ns) -> argmax density
  for (const auto& c : figure_preset("fig2a").curves) {
    const auto curve = select(rows, c.label, Tier::Sat, Method::Analytic);
    const auto k = argmax(curve);
    const bool interior = k > 0 && k + 1 < curve.size();
    const auto cfg = validate(c.scenario);
    peak[{int(cfg.mean_height), int(std::lround(cfg.visible_sat_count()))}] = curve[k].swept_value;
    v.require(interior, c.label + ": maximum " + num(curve[k].result.coverage) + " at " + num(curve[k].swept_value) +
                            "/km^2 (ends " + num(curve.front().result.coverage) + ", " +
                            num(curve.back().result.coverage) + ")");
  }
  for (int h : {20, 50}) {
    const bool ok = peak[{h, 50}] <= peak[{h, 100}] && peak[{h, 100}] <= peak[{h, 200}];
    v.require(ok, "h " + std::to_string(h) + " m: argmax non-decreasing in visible satellites (" + num(peak[{h, 50}]) +
                      ", " + num(peak[{h, 100}]) + ", " + num(peak[{h, 200}]) + ")");
  }
  for (int ns : {50, 100, 200}) {
    const bool ok = peak[{50, ns}] <= peak[{20, ns}];
    v.require(ok, "ns " + std::to_string(ns) + ": argmax non-increasing in mean height (" + num(peak[{20, ns}]) + " -> " +
                      num(peak[{50, ns}]) + ")");
  }
  return v;
}

Verdict criterion5() {
  Verdict v;
  const auto& rows = g_rows.at("fig3a");
  for (const auto& c : figure_preset("fig3a").curves) {
    const auto curve = select(rows, c.label, Tier::Ter, Method::Analytic);
    const auto& last = curve.back();
    ScenarioSpec spec = c.scenario;
    spec.set("blockage_density_per_km2", last.swept_value);
    const auto cfg = validate(spec);
    const auto m = TerTierModel::from_config(cfg);
    const double tau = cfg.sinr_threshold;
    auto integrand = [&](double r) {
      const double p = ter_los_probability(m.blockage, r);
      const double x_los = m.nakagami_m * std::pow(r, m.alpha_los) * tau / m.serving_gain() * m.noise;
      const double x_nlos = std::pow(r, m.alpha_nlos) * tau / m.serving_gain() * m.noise;
      double ccdf = 0.0, term = 1.0;
      for (int k = 0; k < m.nakagami_m; ++k) {
        if (k > 0) term *= x_los / k;
        ccdf += term;
      }
      return nearest_tbs_pdf(m.lambda_t, r) * (p * ccdf * std::exp(-x_los) + (1 - p) * std::exp(-x_nlos));
    };
    const double noise_only =
        gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-12);
    const double diff = std::abs(last.result.coverage - noise_only);
    v.require(diff <= 0.01, c.label + " at " + num(last.swept_value) + "/km^2: coverage " + num(last.result.coverage) +
                                ", noise-only " + num(noise_only) + ", |diff| " + num(diff, 3));
  }
  return v;
}

Verdict criterion6() {
  Verdict v;
  const auto& rows = g_rows.at("fig4");
  const auto sat = select(rows, "ref", Tier::Sat, Method::Analytic);
  const auto ter = select(rows, "ref", Tier::Ter, Method::Analytic);
  const auto both = select(rows, "ref", Tier::Istn, Method::Analytic);
  bool dominant = true;
  std::size_t best = 0;
  std::vector<double> gain(both.size());
  for (std::size_t i = 0; i < both.size(); ++i) {
    const double hi = std::max(sat[i].result.coverage, ter[i].result.coverage);
    dominant = dominant && both[i].result.coverage >= hi;
    gain[i] = both[i].result.coverage - hi;
    if (gain[i] > gain[best]) best = i;
  }
  v.require(dominant, "ISTN coverage >= max(sat, ter) at all " + std::to_string(both.size()) + " thresholds");
  v.require(best > 0 && best + 1 < gain.size(), "largest gain " + num(gain[best]) + " at " + num(both[best].tau_db) +
                                                    " dB (ends " + num(gain.front()) + ", " + num(gain.back()) + ")");
  return v;
}

bool non_increasing(const std::vector<ResultRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].result.coverage > rows[i - 1].result.coverage) return false;
  return true;
}

Verdict criterion7() {
  Verdict v;
  int curves = 0, bad = 0;
  for (const char* name : {"fig2b", "fig3b", "fig4"})
    for (const auto& c : figure_preset(name).curves)
      for (Tier t : {Tier::Sat, Tier::Ter, Tier::Istn}) {
        const auto curve = select(g_rows.at(name), c.label, t, Method::Analytic);
        if (curve.empty()) continue;
        ++curves;
        bad += !non_increasing(curve);
      }
  v.require(bad == 0, "coverage non-increasing in threshold: " + std::to_string(curves - bad) + "/" +
                          std::to_string(curves) + " analytic curves");

  const auto sat = SatTierModel::from_config(fig4_config());
  const auto& g = sat.geometry;
  int rises = 0;
  double prev = curvature_scaling(g, g.psi_max() / 200, sat.blockage.sigma_b);
  const double first = prev;
  for (int i = 2; i <= 200; ++i) {
    const double eta = curvature_scaling(g, g.psi_max() * i / 200, sat.blockage.sigma_b);
    rises += eta > prev;
    prev = eta;
  }
  v.require(rises == 0, "curvature scaling non-increasing in psi on (0, psi_max]: " + std::to_string(rises) +
                            "/199 steps increase; eta " + num(first) + " at psi_max/200, " + num(prev) + " at psi_max");

  bool strict = true;
  for (const auto& m : {TerTierModel::from_config(fig4_config()), TerTierModel::from_config(fig3a_config(29, 1e6))}) {
    double last = ter_los_probability(m.blockage, 0.0);
    for (int i = 1; i <= 400; ++i) {
      const double p = ter_los_probability(m.blockage, 5.0 * i);
      strict = strict && (p < last || (p == 0.0 && last == 0.0));
      last = p;
    }
  }
  v.require(strict, "terrestrial LoS probability strictly decreasing in r (0..2000 m)");
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion8() {
  Verdict v;
  const auto base = fs::temp_directory_path() / "istn_acceptance_determinism";
  fs::remove_all(base);
  std::vector<std::string> csv;
  for (int threads : {1, 1, 4}) {
    RunOptions opt;
    opt.preset = "fig4";
    opt.trials = 20000;
    opt.seed = 42;
    opt.mc.threads = threads;
    opt.out_dir = (base / ("run" + std::to_string(csv.size()))).string();
    const auto r = run(opt);
    if (r.exit_code != 0) {
      v.require(false, "run failed: " + r.message);
      return v;
    }
    csv.push_back(slurp(fs::path(opt.out_dir) / "results.csv"));
  }
  v.require(csv[0] == csv[1], "repeated run, same seed: results.csv byte-identical (" + std::to_string(csv[0].size()) +
                                  " bytes)");
  v.require(csv[0] == csv[2], "run with 4 workers: results.csv byte-identical");
  fs::remove_all(base);
  return v;
}

Verdict criterion9() {
  Verdict v;
  const auto sat = SatTierModel::from_config(fig4_config());
  McOptions opt;
  opt.trials = kTrials;
  opt.seed = 9;
  const auto gamma = mc_sat_coverage(sat, 1.0, opt);
  opt.exact_sr = true;
  const auto exact = mc_sat_coverage(sat, 1.0, opt);
  const double diff = std::abs(gamma.mean - exact.mean);
  v.require(diff <= 0.02, "fig4 at 0 dB: Gamma " + num(gamma.mean) + ", shadowed-Rician " + num(exact.mean) +
                              ", |diff| " + num(diff, 3) + " (95% half-widths " + num(gamma.half_width_95, 2) + ")");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    Verdict (*check)();
  };
  const Criterion criteria[] = {
      {1, "tier cross-validation, analytic vs Monte Carlo", criterion1},
      {2, "component oracles", criterion2},
      {3, "jet derivatives vs finite differences", criterion3},
      {4, "satellite coverage vs blockage density has interior maxima", criterion4},
      {5, "dense blockage leaves the terrestrial tier noise-limited", criterion5},
      {6, "ISTN dominance with an interior gain maximum", criterion6},
      {7, "monotonicity suite", criterion7},
      {8, "deterministic CSV output", criterion8},
      {9, "Gamma approximation fidelity", criterion9},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::printf("criterion %d %s: %s\n", c.id, v.pass ? "PASS" : "FAIL", c.title);
    for (const auto& d : v.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
