#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "istn/istn.h"

int main(int argc, char** argv) {
  CLI::App app{"Coverage of integrated satellite-terrestrial networks under Boolean blockage"};
  app.set_version_flag("--version", std::string(istn_version()));

  std::string scenario, sweep, out = "out", methods, tiers, preset;
  unsigned long long trials = 200000, seed = 1;
  bool verify = false, strict = false, emit_only = false;
  bool round_shape = false, exact_sr = false, explicit_paths = false, geometric = false;
  double tol_tier = 0.015, tol_istn = 0.02;
  int threads = 0;

  app.add_option("--scenario", scenario, "Scenario file (key = value)");
  app.add_option("--sweep", sweep, "Sweep file");
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--methods", methods, "Comma list: analytic,mc");
  app.add_option("--tiers", tiers, "Comma list: sat,ter,istn");
  app.add_option("--trials", trials, "Monte Carlo trials per point")->capture_default_str();
  app.add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
  app.add_flag("--verify", verify, "Compare analytic and MC; exit 4 beyond tolerance");
  app.add_option("--tol", tol_tier, "Verify tolerance for sat and ter")->capture_default_str();
  app.add_option("--tol-istn", tol_istn, "Verify tolerance for istn")->capture_default_str();
  app.add_option("--preset", preset, "Figure preset: fig2a, fig2b, fig3a, fig3b, fig4");
  app.add_flag("--emit-only", emit_only, "Write the preset files and stop");
  app.add_flag("--strict-paper-eq22", strict, "Terrestrial LoS sum without the s^k factor");
  app.add_flag("--round-serving-shape", round_shape, "MC serving satellite fade with the rounded shape");
  app.add_flag("--exact-sr", exact_sr, "MC shadowed-Rician fades on satellite links");
  app.add_flag("--explicit-sat-paths", explicit_paths, "MC blockages drawn along each satellite link");
  app.add_flag("--geometric-ter-los", geometric, "MC serving TBS link against a rectangle field");
  app.add_option("--threads", threads, "MC worker threads (0: ISTN_THREADS or all cores)");
  CLI11_PARSE(app, argc, argv);

  istn_run_options opt;
  istn_run_options_init(&opt);
  opt.scenario_path = scenario.empty() ? nullptr : scenario.c_str();
  opt.sweep_path = sweep.empty() ? nullptr : sweep.c_str();
  opt.preset = preset.empty() ? nullptr : preset.c_str();
  opt.out_dir = out.c_str();
  opt.methods = methods.empty() ? nullptr : methods.c_str();
  opt.tiers = tiers.empty() ? nullptr : tiers.c_str();
  opt.trials = trials;
  opt.seed = seed;
  opt.verify = verify;
  opt.tol_tier = tol_tier;
  opt.tol_istn = tol_istn;
  opt.strict_ter_sum = strict;
  opt.emit_only = emit_only;
  opt.mc.round_serving_shape = round_shape;
  opt.mc.exact_sr = exact_sr;
  opt.mc.explicit_sat_paths = explicit_paths;
  opt.mc.geometric_ter_los = geometric;
  opt.mc.threads = threads;

  istn_run_summary summary{};
  const istn_status status = istn_run(&opt, &summary);
  if (status != ISTN_OK) std::fprintf(stderr, "istn: %s\n", istn_last_error());
  if (status == ISTN_OK || status == ISTN_VERIFY) {
    std::printf("%zu rows written to %s\n", summary.rows, out.c_str());
    if (verify) std::printf("%zu analytic/MC pairs, max |diff| %.6f\n", summary.verified_pairs, summary.max_abs_diff);
  }
  switch (status) {
    case ISTN_OK:
      return 0;
    case ISTN_CONFIG:
    case ISTN_INVALID_ARGUMENT:
      return 2;
    case ISTN_NUMERICAL:
      return 3;
    case ISTN_VERIFY:
      return 4;
    case ISTN_IO:
      return 5;
    default:
      return 6;
  }
}
