#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "units.hpp"

namespace istn {
namespace {

constexpr double kKm = 1e3;
constexpr double kPerKm2 = 1e-6;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

const std::vector<ScenarioKey>& scenario_keys() {
  static const std::vector<ScenarioKey> keys = {
      {"earth_radius_km", "km", false},
      {"sat_altitude_km", "km", true},
      {"sat_density_per_km2", "1/km^2 on the shell", false},
      {"sat_visible_count", "mean visible satellites", false},
      {"tbs_density_per_km2", "1/km^2", true},
      {"user_density_per_km2", "1/km^2", false},
      {"blockage_density_per_km2", "1/km^2", true},
      {"mean_len_m", "m", true},
      {"mean_wid_m", "m", true},
      {"mean_height_m", "m", true},
      {"tbs_height_m", "m", true},
      {"tx_power_sat_dbm", "dBm", true},
      {"tx_power_tbs_dbm", "dBm", true},
      {"gain_main_sat_dbi", "dBi", true},
      {"gain_side_sat_dbi", "dBi", true},
      {"gain_main_tbs_dbi", "dBi", true},
      {"gain_side_tbs_dbi", "dBi", true},
      {"alpha_sat", "", true},
      {"alpha_los", "", true},
      {"alpha_nlos", "", true},
      {"nakagami_m", "integer", true},
      {"sr_m", "", true},
      {"sr_b0", "", true},
      {"sr_omega", "", true},
      {"noise_sat_dbm", "dBm", false},
      {"bandwidth_sat_mhz", "MHz", false},
      {"noise_ter_dbm", "dBm", false},
      {"bandwidth_ter_mhz", "MHz", false},
      {"carrier_sat_ghz", "GHz", true},
      {"carrier_ter_ghz", "GHz", true},
      {"use_fspl_constant", "bool", false},
      {"sinr_threshold_db", "dB", true},
  };
  return keys;
}

bool is_scenario_key(std::string_view key) {
  const auto& keys = scenario_keys();
  return std::any_of(keys.begin(), keys.end(), [&](const ScenarioKey& k) { return k.name == key; });
}

double ScenarioConfig::sigma_b() const { return mean_height * std::sqrt(2.0 / std::numbers::pi); }

double ScenarioConfig::visible_sat_count() const {
  const double rs = shell_radius();
  return sat_density * 2.0 * std::numbers::pi * rs * (rs - earth_radius);
}

double ScenarioConfig::path_constant_sat() const {
  return use_fspl_constant ? fspl_constant(carrier_sat) : 1.0;
}

double ScenarioConfig::path_constant_ter() const {
  return use_fspl_constant ? fspl_constant(carrier_ter) : 1.0;
}

void ScenarioSpec::set(std::string_view key, std::string_view value) {
  if (!is_scenario_key(key)) throw ConfigError(std::string(key), "unknown key");
  const auto text = trim(value);
  if (key == "use_fspl_constant") {
    const auto v = lower(text);
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
      set(key, 1.0);
    } else if (v == "false" || v == "0" || v == "no" || v == "off") {
      set(key, 0.0);
    } else {
      throw ConfigError(std::string(key), "expected a boolean, got '" + std::string(text) + "'");
    }
    return;
  }
  double parsed = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, parsed);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  set(key, parsed);
}

void ScenarioSpec::set(std::string_view key, double value) {
  if (!is_scenario_key(key)) throw ConfigError(std::string(key), "unknown key");
  values_.insert_or_assign(std::string(key), value);
}

void ScenarioSpec::erase(std::string_view key) {
  if (auto it = values_.find(key); it != values_.end()) values_.erase(it);
}

std::optional<double> ScenarioSpec::get(std::string_view key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return std::nullopt;
}

std::string ScenarioSpec::serialize() const {
  std::ostringstream out;
  for (const auto& k : scenario_keys()) {
    const auto v = get(k.name);
    if (!v) continue;
    out << k.name << " = ";
    if (k.name == "use_fspl_constant") {
      out << (*v != 0.0 ? "true" : "false");
    } else {
      out << format_double(*v);
    }
    out << '\n';
  }
  return out.str();
}

ScenarioSpec parse_scenario(std::string_view text) {
  ScenarioSpec spec;
  std::vector<FieldError> errors;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({"line " + std::to_string(line_no), "expected 'key = value'"});
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (spec.contains(key)) {
      errors.push_back({std::string(key), "duplicate key"});
      continue;
    }
    try {
      spec.set(key, value);
    } catch (const ConfigError& e) {
      errors.insert(errors.end(), e.errors().begin(), e.errors().end());
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return spec;
}

ScenarioSpec load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario", "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

ScenarioConfig validate(const ScenarioSpec& spec) {
  std::vector<FieldError> errors;
  ScenarioConfig cfg;

  auto fetch = [&](std::string_view key) -> std::optional<double> {
    auto v = spec.get(key);
    if (v && !std::isfinite(*v)) {
      errors.push_back({std::string(key), "must be finite"});
      return std::nullopt;
    }
    return v;
  };
  auto required = [&](std::string_view key) -> std::optional<double> {
    auto v = fetch(key);
    if (!v && !spec.contains(key)) errors.push_back({std::string(key), "missing required key"});
    return v;
  };
  auto positive = [&](std::string_view key, std::optional<double> v) -> double {
    if (!v) return 0.0;
    if (!(*v > 0.0)) errors.push_back({std::string(key), "must be strictly positive"});
    return *v;
  };
  auto one_of = [&](std::string_view a, std::string_view b) -> int {
    const bool has_a = spec.contains(a);
    const bool has_b = spec.contains(b);
    if (has_a == has_b) {
      errors.push_back({std::string(a),
                        has_a ? "give only one of " + std::string(a) + " and " + std::string(b)
                              : "missing: give " + std::string(a) + " or " + std::string(b)});
      return -1;
    }
    return has_a ? 0 : 1;
  };

  cfg.earth_radius = positive("earth_radius_km", fetch("earth_radius_km").value_or(6371.0)) * kKm;
  cfg.sat_altitude = positive("sat_altitude_km", required("sat_altitude_km")) * kKm;

  switch (one_of("sat_density_per_km2", "sat_visible_count")) {
    case 0:
      cfg.sat_density = positive("sat_density_per_km2", fetch("sat_density_per_km2")) * kPerKm2;
      break;
    case 1: {
      const double ns = positive("sat_visible_count", fetch("sat_visible_count"));
      const double rs = cfg.earth_radius + cfg.sat_altitude;
      if (cfg.sat_altitude > 0.0) cfg.sat_density = ns / (2.0 * std::numbers::pi * rs * (rs - cfg.earth_radius));
      break;
    }
    default:
      break;
  }

  cfg.tbs_density = positive("tbs_density_per_km2", required("tbs_density_per_km2")) * kPerKm2;
  if (auto u = fetch("user_density_per_km2")) cfg.user_density = positive("user_density_per_km2", u) * kPerKm2;
  cfg.blockage_density = positive("blockage_density_per_km2", required("blockage_density_per_km2")) * kPerKm2;
  cfg.mean_len = positive("mean_len_m", required("mean_len_m"));
  cfg.mean_wid = positive("mean_wid_m", required("mean_wid_m"));
  cfg.mean_height = positive("mean_height_m", required("mean_height_m"));
  cfg.tbs_height = positive("tbs_height_m", required("tbs_height_m"));

  auto decibel = [&](std::string_view key, DbKind kind) -> double {
    auto v = required(key);
    return v ? from_db(*v, kind) : 0.0;
  };
  cfg.tx_power_sat = decibel("tx_power_sat_dbm", DbKind::Dbm);
  cfg.tx_power_tbs = decibel("tx_power_tbs_dbm", DbKind::Dbm);
  cfg.gain_main_sat = decibel("gain_main_sat_dbi", DbKind::Dbi);
  cfg.gain_side_sat = decibel("gain_side_sat_dbi", DbKind::Dbi);
  cfg.gain_main_tbs = decibel("gain_main_tbs_dbi", DbKind::Dbi);
  cfg.gain_side_tbs = decibel("gain_side_tbs_dbi", DbKind::Dbi);

  auto exponent = [&](std::string_view key) -> double {
    auto v = required(key);
    if (v && !(*v >= 2.0)) errors.push_back({std::string(key), "path-loss exponent must be >= 2"});
    return v.value_or(0.0);
  };
  cfg.alpha_sat = exponent("alpha_sat");
  cfg.alpha_los = exponent("alpha_los");
  cfg.alpha_nlos = exponent("alpha_nlos");

  if (auto m = required("nakagami_m")) {
    if (!(*m >= 1.0) || std::floor(*m) != *m || *m > 1e6) {
      errors.push_back({"nakagami_m", "must be an integer >= 1"});
    } else {
      cfg.nakagami_m = static_cast<int>(*m);
    }
  }

  cfg.sr.m = positive("sr_m", required("sr_m"));
  cfg.sr.b0 = positive("sr_b0", required("sr_b0"));
  cfg.sr.omega = positive("sr_omega", required("sr_omega"));

  auto noise = [&](std::string_view dbm_key, std::string_view bw_key) -> double {
    switch (one_of(dbm_key, bw_key)) {
      case 0:
        if (auto v = fetch(dbm_key)) return from_db(*v, DbKind::Dbm);
        return 0.0;
      case 1: {
        const double mhz = positive(bw_key, fetch(bw_key));
        return mhz > 0.0 ? thermal_noise_watts(mhz * 1e6) : 0.0;
      }
      default:
        return 0.0;
    }
  };
  cfg.noise_sat = noise("noise_sat_dbm", "bandwidth_sat_mhz");
  cfg.noise_ter = noise("noise_ter_dbm", "bandwidth_ter_mhz");

  cfg.carrier_sat = positive("carrier_sat_ghz", required("carrier_sat_ghz")) * 1e9;
  cfg.carrier_ter = positive("carrier_ter_ghz", required("carrier_ter_ghz")) * 1e9;
  cfg.use_fspl_constant = fetch("use_fspl_constant").value_or(1.0) != 0.0;

  if (auto t = required("sinr_threshold_db")) cfg.sinr_threshold = from_db(*t, DbKind::Db);

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

ScenarioSpec reference_scenario() {
  ScenarioSpec s;
  s.set("earth_radius_km", 6371.0);
  s.set("sat_altitude_km", 550.0);
  s.set("sat_visible_count", 100.0);
  s.set("tbs_density_per_km2", 4.5);
  s.set("blockage_density_per_km2", 1000.0);
  s.set("mean_len_m", 10.0);
  s.set("mean_wid_m", 10.0);
  s.set("mean_height_m", 50.0);
  s.set("tbs_height_m", 35.0);
  s.set("tx_power_sat_dbm", 50.0);
  s.set("tx_power_tbs_dbm", 40.0);
  s.set("gain_main_sat_dbi", 38.0);
  s.set("gain_side_sat_dbi", 28.0);
  s.set("gain_main_tbs_dbi", 0.0);
  s.set("gain_side_tbs_dbi", 0.0);
  s.set("alpha_sat", 2.0);
  s.set("alpha_los", 2.5);
  s.set("alpha_nlos", 4.0);
  s.set("nakagami_m", 2.0);
  s.set("sr_m", 19.0);
  s.set("sr_b0", 0.158);
  s.set("sr_omega", 1.29);
  s.set("noise_sat_dbm", -107.0);
  s.set("noise_ter_dbm", -94.0);
  s.set("carrier_sat_ghz", 1.99);
  s.set("carrier_ter_ghz", 3.5);
  s.set("use_fspl_constant", 1.0);
  s.set("sinr_threshold_db", 0.0);
  return s;
}

}  // namespace istn
