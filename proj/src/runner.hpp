#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "coverage.hpp"
#include "montecarlo.hpp"

namespace istn {

inline constexpr std::string_view kVersion = "0.1.0";

/// A one-dimensional sweep over a scenario key.
struct SweepSpec {
  std::string variable;
  std::vector<double> values;
  std::vector<Method> methods{Method::Analytic};
  std::vector<Tier> tiers{Tier::Sat, Tier::Ter, Tier::Istn};

  std::string serialize() const;
};

/// Parses `variable = key`, `grid = lin|log min max count` or
/// `values = v1 v2 ...`, `methods = ...`, `tiers = ...`.
SweepSpec parse_sweep(std::string_view text);
SweepSpec load_sweep_file(const std::string& path);

std::vector<Method> parse_methods(std::string_view list);
std::vector<Tier> parse_tiers(std::string_view list);

std::vector<double> lin_grid(double lo, double hi, int count);
std::vector<double> log_grid(double lo, double hi, int count);

struct PresetCurve {
  std::string label;
  ScenarioSpec scenario;
};

struct FigurePreset {
  std::string name;
  SweepSpec sweep;
  std::vector<PresetCurve> curves;
};

const std::vector<std::string>& preset_names();
/// Throws ConfigError on an unknown name.
FigurePreset figure_preset(std::string_view name);

/// Writes `<name>_<curve>.scenario` per curve and `<name>.sweep` into out_dir.
/// Returns the written paths.
std::vector<std::string> emit_figure_preset(std::string_view name, const std::string& out_dir);

struct ResultRow {
  std::string curve;
  Tier tier = Tier::Sat;
  Method method = Method::Analytic;
  double tau_db = 0.0;
  std::string swept_key;
  double swept_value = 0.0;
  CoverageResult result;
};

struct VerifyRow {
  std::string curve;
  Tier tier = Tier::Sat;
  double tau_db = 0.0;
  double swept_value = 0.0;
  double analytic = 0.0;
  double mc = 0.0;
  double tolerance = 0.0;
  bool pass() const;
};

struct RunOptions {
  std::string scenario_path;
  std::string sweep_path;
  std::string preset;
  std::string out_dir = "out";
  std::vector<Method> methods;  // empty: from the sweep file
  std::vector<Tier> tiers;      // empty: from the sweep file
  std::uint64_t trials = 200000;
  std::uint64_t seed = 1;
  bool verify = false;
  double tol_tier = 0.015;
  double tol_istn = 0.02;
  bool strict_ter_sum = false;
  bool emit_only = false;
  McOptions mc;
};

struct RunReport {
  int exit_code = 0;
  std::string message;
  std::vector<ResultRow> rows;
  std::vector<VerifyRow> verify;
  double max_abs_diff = 0.0;
};

/// Evaluates one curve over a sweep. The scenario's own threshold applies
/// unless the sweep variable is sinr_threshold_db.
std::vector<ResultRow> evaluate_curve(const std::string& label, const ScenarioSpec& scenario, const SweepSpec& sweep,
                                      const RunOptions& opt);

/// Pairs analytic and MC rows of the same curve, tier and grid point.
std::vector<VerifyRow> pair_rows(const std::vector<ResultRow>& rows, double tol_tier, double tol_istn);

std::string results_csv(const std::vector<ResultRow>& rows);
std::string verify_csv(const std::vector<VerifyRow>& rows);

/// Runs a scenario or preset, writes results.csv, verify.csv (with verify),
/// metadata.json and the .dat plot files. Exit codes: 0 ok, 2 configuration,
/// 3 numerical failure, 4 verification failure, 5 output failure.
RunReport run(const RunOptions& opt);

}  // namespace istn
