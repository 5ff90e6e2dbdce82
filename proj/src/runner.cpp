#include "runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "analytic_istn.hpp"
#include "analytic_sat.hpp"
#include "analytic_ter.hpp"

namespace istn {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kThresholdKey = "sinr_threshold_db";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t j = s.find_first_of(seps, i);
    const auto piece = trim(s.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (!piece.empty()) out.push_back(piece);
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(std::string(field), "not a number: '" + std::string(text) + "'");
  return v;
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

ScenarioSpec with(ScenarioSpec s, std::initializer_list<std::pair<const char*, double>> values) {
  for (const auto& [k, v] : values) s.set(k, v);
  return s;
}

std::string label_number(double v) {
  std::string s = fmt(v);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

bool contains(const std::vector<Tier>& v, Tier t) { return std::find(v.begin(), v.end(), t) != v.end(); }
bool contains(const std::vector<Method>& v, Method m) { return std::find(v.begin(), v.end(), m) != v.end(); }

struct PointModels {
  ScenarioConfig cfg;
  std::optional<SatTierModel> sat;
  std::optional<TerTierModel> ter;
};

// Evaluates every requested tier and method at one model for a set of
// thresholds; swept[i] is the grid value attached to taus[i].
void evaluate_point(const std::string& label, const PointModels& pm, const std::vector<double>& taus,
                    const std::string& key, const std::vector<double>& swept, const SweepSpec& sweep,
                    const RunOptions& opt, std::vector<ResultRow>& rows) {
  const bool want_sat = contains(sweep.tiers, Tier::Sat);
  const bool want_ter = contains(sweep.tiers, Tier::Ter);
  const bool want_istn = contains(sweep.tiers, Tier::Istn);
  const std::size_t n = taus.size();

  std::vector<CoverageResult> a_sat, a_ter, a_istn, m_sat, m_ter, m_istn;
  if (contains(sweep.methods, Method::Analytic)) {
    if (want_sat || want_istn) a_sat = sat_coverage(*pm.sat, taus);
    if (want_ter || want_istn) a_ter = ter_coverage(*pm.ter, taus);
    if (want_istn) {
      for (std::size_t i = 0; i < n; ++i) {
        CoverageResult r;
        r.coverage = istn_coverage(a_ter[i].coverage, a_sat[i].coverage).p_istn;
        r.quad_err = a_ter[i].quad_err + a_sat[i].quad_err;
        a_istn.push_back(r);
      }
    }
  }
  if (contains(sweep.methods, Method::MonteCarlo)) {
    McOptions mc = opt.mc;
    mc.trials = opt.trials;
    mc.seed = opt.seed;
    auto to_results = [&](const std::vector<McEstimate>& est) {
      std::vector<CoverageResult> out;
      for (const auto& e : est) {
        CoverageResult r;
        r.coverage = e.mean;
        r.method = Method::MonteCarlo;
        r.ci_half_width = e.half_width_95;
        r.trials = e.trials;
        r.seed = e.seed;
        out.push_back(r);
      }
      return out;
    };
    if (want_istn || (want_sat && want_ter)) {
      const auto all = mc_all_coverage(*pm.sat, *pm.ter, taus, mc);
      m_sat = to_results(all.sat);
      m_ter = to_results(all.ter);
      m_istn = to_results(all.istn);
    } else if (want_sat) {
      m_sat = to_results(mc_sat_coverage(*pm.sat, taus, mc));
    } else if (want_ter) {
      m_ter = to_results(mc_ter_coverage(*pm.ter, taus, mc));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto emit = [&](Tier tier, const std::vector<CoverageResult>& analytic, const std::vector<CoverageResult>& mc) {
      for (Method m : sweep.methods) {
        const auto& src = m == Method::Analytic ? analytic : mc;
        if (src.empty()) continue;
        ResultRow row;
        row.curve = label;
        row.tier = tier;
        row.method = m;
        row.tau_db = 10.0 * std::log10(taus[i]);
        row.swept_key = key;
        row.swept_value = swept[i];
        row.result = src[i];
        row.result.method = m;
        rows.push_back(row);
      }
    };
    for (Tier t : sweep.tiers) {
      if (t == Tier::Sat) emit(t, a_sat, m_sat);
      if (t == Tier::Ter) emit(t, a_ter, m_ter);
      if (t == Tier::Istn) emit(t, a_istn, m_istn);
    }
  }
}

PointModels build_models(const ScenarioSpec& spec, const SweepSpec& sweep, const RunOptions& opt) {
  PointModels pm{validate(spec), {}, {}};
  const bool istn = contains(sweep.tiers, Tier::Istn);
  const bool both = contains(sweep.tiers, Tier::Sat) && contains(sweep.tiers, Tier::Ter) &&
                    contains(sweep.methods, Method::MonteCarlo);
  if (istn || both || contains(sweep.tiers, Tier::Sat)) pm.sat = SatTierModel::from_config(pm.cfg);
  if (istn || both || contains(sweep.tiers, Tier::Ter)) pm.ter = TerTierModel::from_config(pm.cfg, opt.strict_ter_sum);
  return pm;
}

std::string dat_name(const std::string& figure, Tier tier, const std::string& curve, Method m) {
  return figure + "_" + std::string(to_string(tier)) + "_" + curve + "-" + std::string(to_string(m)) + ".dat";
}

nlohmann::ordered_json metadata(const std::string& figure, const std::vector<std::string>& curves,
                                const SweepSpec& sweep, const RunOptions& opt) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["figure"] = figure;
  j["curves"] = curves;
  j["swept_key"] = sweep.variable;
  j["grid"] = sweep.values;
  j["seed"] = opt.seed;
  j["trials"] = opt.trials;
  j["ter_los_sum"] = opt.strict_ter_sum ? "literal (no s^k factor)" : "gamma-ccdf (with s^k factor)";
  j["mc_serving_shape"] = opt.mc.exact_sr ? "exact shadowed-rician" : opt.mc.round_serving_shape ? "rounded" : "unrounded";
  j["mc_sat_fading"] = opt.mc.exact_sr ? "exact shadowed-rician" : "gamma";
  j["mc_sat_los"] = opt.mc.sat_los == SatLosMode::Bernoulli ? "bernoulli" : "explicit-path";
  j["mc_ter_los"] = opt.mc.ter_los == TerLosMode::Bernoulli ? "bernoulli" : "geometric";
  j["mc_r_sim_m"] = opt.mc.r_sim > 0.0 ? nlohmann::ordered_json(opt.mc.r_sim) : nlohmann::ordered_json("auto");
  j["mc_tail_compensation"] = opt.mc.tail_compensation;
  if (opt.verify) j["tolerance"] = {{"sat", opt.tol_tier}, {"ter", opt.tol_tier}, {"istn", opt.tol_istn}};
  return j;
}

}  // namespace

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> out;
  for (auto item : split(list, ", ")) {
    Method m;
    if (item == "analytic")
      m = Method::Analytic;
    else if (item == "mc")
      m = Method::MonteCarlo;
    else
      throw ConfigError("methods", "unknown method '" + std::string(item) + "' (expected analytic, mc)");
    if (!contains(out, m)) out.push_back(m);
  }
  if (out.empty()) throw ConfigError("methods", "no method given");
  return out;
}

std::vector<Tier> parse_tiers(std::string_view list) {
  std::vector<Tier> out;
  for (auto item : split(list, ", ")) {
    Tier t;
    if (item == "sat")
      t = Tier::Sat;
    else if (item == "ter")
      t = Tier::Ter;
    else if (item == "istn")
      t = Tier::Istn;
    else
      throw ConfigError("tiers", "unknown tier '" + std::string(item) + "' (expected sat, ter, istn)");
    if (!contains(out, t)) out.push_back(t);
  }
  if (out.empty()) throw ConfigError("tiers", "no tier given");
  return out;
}

std::vector<double> lin_grid(double lo, double hi, int count) {
  if (count < 1) throw ConfigError("grid", "count must be at least 1");
  if (count == 1) return {lo};
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = i == count - 1 ? hi : lo + (hi - lo) * i / (count - 1);
  return g;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw ConfigError("grid", "log grid bounds must be positive");
  auto g = lin_grid(std::log10(lo), std::log10(hi), count);
  for (int i = 0; i < count; ++i) g[i] = i == 0 ? lo : i == count - 1 ? hi : std::pow(10.0, g[i]);
  return g;
}

std::string SweepSpec::serialize() const {
  std::string s = "variable = " + variable + "\nvalues =";
  for (double v : values) s += " " + fmt(v);
  s += "\nmethods =";
  for (std::size_t i = 0; i < methods.size(); ++i) s += (i ? ", " : " ") + std::string(to_string(methods[i]));
  s += "\ntiers =";
  for (std::size_t i = 0; i < tiers.size(); ++i) s += (i ? ", " : " ") + std::string(to_string(tiers[i]));
  return s + "\n";
}

SweepSpec parse_sweep(std::string_view text) {
  SweepSpec sweep;
  std::vector<FieldError> errors;
  bool have_grid = false;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = trim(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({"sweep", "line " + std::to_string(line_no) + ": expected key = value"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (seen[key]++) {
      errors.push_back({key, where + "duplicate key"});
      continue;
    }
    try {
      if (key == "variable") {
        sweep.variable = std::string(value);
        if (!is_scenario_key(value)) throw ConfigError("variable", "not a scenario key: '" + sweep.variable + "'");
      } else if (key == "grid" || key == "values") {
        if (have_grid) throw ConfigError(key, "give either grid or values, not both");
        have_grid = true;
        const auto parts = split(value, " \t,");
        if (key == "values") {
          for (auto p : parts) sweep.values.push_back(parse_number("values", p));
        } else {
          if (parts.size() != 4) throw ConfigError("grid", "expected lin|log min max count");
          const double lo = parse_number("grid", parts[1]);
          const double hi = parse_number("grid", parts[2]);
          const double count = parse_number("grid", parts[3]);
          if (count != std::floor(count) || count < 1 || count > 100000)
            throw ConfigError("grid", "count must be a positive integer");
          if (parts[0] == "lin")
            sweep.values = lin_grid(lo, hi, static_cast<int>(count));
          else if (parts[0] == "log")
            sweep.values = log_grid(lo, hi, static_cast<int>(count));
          else
            throw ConfigError("grid", "spacing must be lin or log");
        }
      } else if (key == "methods") {
        sweep.methods = parse_methods(value);
      } else if (key == "tiers") {
        sweep.tiers = parse_tiers(value);
      } else {
        throw ConfigError(key, "unknown sweep key");
      }
    } catch (const ConfigError& e) {
      for (const auto& fe : e.errors()) errors.push_back({fe.field, where + fe.message});
    }
  }
  if (sweep.variable.empty() && !seen.count("variable")) errors.push_back({"variable", "missing"});
  if (!have_grid) errors.push_back({"grid", "missing grid or values"});
  if (have_grid && sweep.values.empty()) errors.push_back({"grid", "grid is empty"});
  const bool increasing = std::adjacent_find(sweep.values.begin(), sweep.values.end(), std::greater_equal<>()) ==
                          sweep.values.end();
  const bool decreasing = std::adjacent_find(sweep.values.begin(), sweep.values.end(), std::less_equal<>()) ==
                          sweep.values.end();
  if (!increasing && !decreasing) errors.push_back({"grid", "grid must be strictly monotone"});
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return sweep;
}

SweepSpec load_sweep_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("sweep", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep(ss.str());
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig2a", "fig2b", "fig3a", "fig3b", "fig4"};
  return names;
}

FigurePreset figure_preset(std::string_view name) {
  const ScenarioSpec base = reference_scenario();
  const std::vector<Method> both = {Method::Analytic, Method::MonteCarlo};
  FigurePreset p;
  p.name = std::string(name);
  if (name == "fig2a") {
    p.sweep = {"blockage_density_per_km2", log_grid(1.0, 1e5, 15), both, {Tier::Sat}};
    for (double h : {20.0, 50.0})
      for (double ns : {50.0, 100.0, 200.0})
        p.curves.push_back({"ns" + label_number(ns) + "-h" + label_number(h),
                            with(base, {{"sat_visible_count", ns}, {"mean_height_m", h}, {"mean_len_m", 20.0},
                                        {"mean_wid_m", 20.0}, {"sinr_threshold_db", 0.0}})});
  } else if (name == "fig2b") {
    p.sweep = {std::string(kThresholdKey), lin_grid(-10.0, 30.0, 15), both, {Tier::Sat}};
    for (double lw : {10.0, 20.0, 30.0})
      p.curves.push_back({"lw" + label_number(lw), with(base, {{"mean_len_m", lw}, {"mean_wid_m", lw}})});
  } else if (name == "fig3a") {
    p.sweep = {"blockage_density_per_km2", log_grid(1.0, 1e6, 15), both, {Tier::Ter}};
    const std::pair<const char*, double> densities[] = {{"rural", 0.385}, {"suburban", 4.5}, {"urban", 29.0}};
    for (const auto& [tag, lt] : densities)
      p.curves.push_back({tag, with(base, {{"tbs_density_per_km2", lt}, {"mean_len_m", 20.0}, {"mean_wid_m", 20.0},
                                           {"sinr_threshold_db", 0.0}})});
  } else if (name == "fig3b") {
    p.sweep = {std::string(kThresholdKey), lin_grid(-10.0, 30.0, 15), both, {Tier::Ter}};
    const std::pair<const char*, double> densities[] = {{"suburban", 4.5}, {"urban", 29.0}};
    for (const auto& [tag, lt] : densities)
      for (double lw : {10.0, 20.0})
        p.curves.push_back({std::string(tag) + "-lw" + label_number(lw),
                            with(base, {{"tbs_density_per_km2", lt}, {"mean_len_m", lw}, {"mean_wid_m", lw}})});
  } else if (name == "fig4") {
    p.sweep = {std::string(kThresholdKey), lin_grid(-10.0, 30.0, 15), both, {Tier::Sat, Tier::Ter, Tier::Istn}};
    p.curves.push_back({"ref", base});
  } else {
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (expected fig2a, fig2b, fig3a, fig3b, fig4)");
  }
  return p;
}

std::vector<std::string> emit_figure_preset(std::string_view name, const std::string& out_dir) {
  const auto p = figure_preset(name);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  std::vector<std::string> paths;
  for (const auto& c : p.curves) {
    const auto path = fs::path(out_dir) / (p.name + "_" + c.label + ".scenario");
    write_file(path, c.scenario.serialize());
    paths.push_back(path.string());
  }
  const auto sweep_path = fs::path(out_dir) / (p.name + ".sweep");
  write_file(sweep_path, p.sweep.serialize());
  paths.push_back(sweep_path.string());
  return paths;
}

bool VerifyRow::pass() const { return std::abs(analytic - mc) <= tolerance; }

std::vector<ResultRow> evaluate_curve(const std::string& label, const ScenarioSpec& scenario, const SweepSpec& sweep,
                                      const RunOptions& opt) {
  std::vector<ResultRow> rows;
  if (sweep.variable == kThresholdKey) {
    const auto pm = build_models(scenario, sweep, opt);
    std::vector<double> taus;
    for (double v : sweep.values) taus.push_back(std::pow(10.0, v / 10.0));
    evaluate_point(label, pm, taus, sweep.variable, sweep.values, sweep, opt, rows);
  } else {
    for (double v : sweep.values) {
      ScenarioSpec spec = scenario;
      spec.set(sweep.variable, v);
      const auto pm = build_models(spec, sweep, opt);
      evaluate_point(label, pm, {pm.cfg.sinr_threshold}, sweep.variable, {v}, sweep, opt, rows);
    }
  }
  return rows;
}

std::vector<VerifyRow> pair_rows(const std::vector<ResultRow>& rows, double tol_tier, double tol_istn) {
  using Key = std::tuple<std::string, int, double, double>;
  std::map<Key, const ResultRow*> analytic;
  for (const auto& r : rows)
    if (r.method == Method::Analytic) analytic[{r.curve, static_cast<int>(r.tier), r.swept_value, r.tau_db}] = &r;
  std::vector<VerifyRow> out;
  for (const auto& r : rows) {
    if (r.method != Method::MonteCarlo) continue;
    const auto it = analytic.find({r.curve, static_cast<int>(r.tier), r.swept_value, r.tau_db});
    if (it == analytic.end()) continue;
    VerifyRow v;
    v.curve = r.curve;
    v.tier = r.tier;
    v.tau_db = r.tau_db;
    v.swept_value = r.swept_value;
    v.analytic = it->second->result.coverage;
    v.mc = r.result.coverage;
    v.tolerance = r.tier == Tier::Istn ? tol_istn : tol_tier;
    out.push_back(v);
  }
  return out;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string s = "tier,method,tau_db,swept_key,swept_value,coverage,ci_half_width,quad_err,trials,seed,curve,version\n";
  for (const auto& r : rows) {
    const bool mc = r.method == Method::MonteCarlo;
    s += std::string(to_string(r.tier)) + "," + std::string(to_string(r.method)) + "," + fmt(r.tau_db) + "," +
         r.swept_key + "," + fmt(r.swept_value) + "," + fmt(r.result.coverage) + "," +
         (mc ? fmt(r.result.ci_half_width) : "") + "," + (mc ? "" : fmt(r.result.quad_err)) + "," +
         (mc ? std::to_string(r.result.trials) : "") + "," + (mc ? std::to_string(r.result.seed) : "") + "," + r.curve +
         "," + std::string(kVersion) + "\n";
  }
  return s;
}

std::string verify_csv(const std::vector<VerifyRow>& rows) {
  std::string s = "curve,tier,tau_db,swept_value,analytic,mc,abs_diff,tolerance,pass\n";
  for (const auto& v : rows)
    s += v.curve + "," + std::string(to_string(v.tier)) + "," + fmt(v.tau_db) + "," + fmt(v.swept_value) + "," +
         fmt(v.analytic) + "," + fmt(v.mc) + "," + fmt(std::abs(v.analytic - v.mc)) + "," + fmt(v.tolerance) + "," +
         (v.pass() ? "1" : "0") + "\n";
  return s;
}

RunReport run(const RunOptions& opt) {
  RunReport report;
  try {
    std::string figure = "run";
    SweepSpec sweep;
    std::vector<PresetCurve> curves;
    if (!opt.preset.empty()) {
      const auto p = figure_preset(opt.preset);
      emit_figure_preset(opt.preset, opt.out_dir);
      if (opt.emit_only) return report;
      figure = p.name;
      sweep = p.sweep;
      curves = p.curves;
    } else {
      if (opt.emit_only) throw ConfigError("preset", "--emit-only needs --preset");
      if (opt.scenario_path.empty()) throw ConfigError("scenario", "no scenario file given");
      curves.push_back({fs::path(opt.scenario_path).stem().string(), load_scenario_file(opt.scenario_path)});
      if (!opt.sweep_path.empty()) {
        sweep = load_sweep_file(opt.sweep_path);
        figure = fs::path(opt.sweep_path).stem().string();
      } else {
        const auto cfg = validate(curves.front().scenario);
        sweep.variable = std::string(kThresholdKey);
        sweep.values = {10.0 * std::log10(cfg.sinr_threshold)};
      }
    }
    if (!opt.methods.empty()) sweep.methods = opt.methods;
    if (!opt.tiers.empty()) sweep.tiers = opt.tiers;
    if (opt.verify) sweep.methods = {Method::Analytic, Method::MonteCarlo};
    if (opt.trials < 1) throw ConfigError("trials", "must be at least 1");

    std::vector<std::string> labels;
    for (const auto& c : curves) {
      auto rows = evaluate_curve(c.label, c.scenario, sweep, opt);
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
      labels.push_back(c.label);
    }

    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) throw IoError("cannot create " + opt.out_dir + ": " + ec.message());
    const fs::path out(opt.out_dir);
    write_file(out / "results.csv", results_csv(report.rows));
    write_file(out / "metadata.json", metadata(figure, labels, sweep, opt).dump(2) + "\n");

    std::map<std::string, std::string> dat;
    std::vector<std::string> order;
    for (const auto& r : report.rows) {
      const auto name = dat_name(figure, r.tier, r.curve, r.method);
      if (!dat.count(name)) order.push_back(name);
      dat[name] += fmt(r.swept_value) + " " + fmt(r.result.coverage) + "\n";
    }
    for (const auto& name : order) write_file(out / name, dat[name]);

    if (opt.verify) {
      report.verify = pair_rows(report.rows, opt.tol_tier, opt.tol_istn);
      write_file(out / "verify.csv", verify_csv(report.verify));
      std::size_t failed = 0;
      for (const auto& v : report.verify) {
        report.max_abs_diff = std::max(report.max_abs_diff, std::abs(v.analytic - v.mc));
        failed += !v.pass();
      }
      if (failed > 0) {
        report.exit_code = 4;
        report.message = std::to_string(failed) + " of " + std::to_string(report.verify.size()) +
                         " analytic/MC pairs exceed tolerance (max |diff| " + fmt(report.max_abs_diff) + ")";
      }
    }
  } catch (const ConfigError& e) {
    report.exit_code = 2;
    report.message = e.what();
  } catch (const NumericalError& e) {
    report.exit_code = 3;
    report.message = e.what();
  } catch (const DomainError& e) {
    report.exit_code = 3;
    report.message = e.what();
  } catch (const IoError& e) {
    report.exit_code = 5;
    report.message = e.what();
  }
  return report;
}

}  // namespace istn
