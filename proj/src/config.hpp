#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace istn {

/// Shadowed-Rician parameters (m, b0, Omega) of a LoS satellite link.
struct ShadowedRicianParams {
  double m = 0.0;
  double b0 = 0.0;
  double omega = 0.0;
};

/// Validated scenario in SI units (meters, watts, hertz, radians, linear
/// ratios). Immutable once produced by validate().
struct ScenarioConfig {
  double earth_radius = 0.0;
  double sat_altitude = 0.0;
  double sat_density = 0.0;     // per m^2 on the shell
  double tbs_density = 0.0;     // per m^2
  double user_density = 0.0;    // per m^2, unused by the typical-user analysis
  double blockage_density = 0.0;
  double mean_len = 0.0;
  double mean_wid = 0.0;
  double mean_height = 0.0;
  double tbs_height = 0.0;
  double tx_power_sat = 0.0;
  double tx_power_tbs = 0.0;
  double gain_main_sat = 0.0;
  double gain_side_sat = 0.0;
  double gain_main_tbs = 0.0;
  double gain_side_tbs = 0.0;
  double alpha_sat = 0.0;
  double alpha_los = 0.0;
  double alpha_nlos = 0.0;
  int nakagami_m = 0;
  ShadowedRicianParams sr;
  double noise_sat = 0.0;
  double noise_ter = 0.0;
  double carrier_sat = 0.0;
  double carrier_ter = 0.0;
  bool use_fspl_constant = true;
  double sinr_threshold = 0.0;  // linear

  double shell_radius() const { return earth_radius + sat_altitude; }
  /// Rayleigh scale from the mean blockage height.
  double sigma_b() const;
  /// Mean number of satellites on the visible cap.
  double visible_sat_count() const;
  /// Reference path-gain constants; 1 when the FSPL constant is disabled.
  double path_constant_sat() const;
  double path_constant_ter() const;
};

/// Description of one scenario-file key.
struct ScenarioKey {
  std::string_view name;
  std::string_view unit;
  bool required;
};

/// The canonical scenario keys in file order.
const std::vector<ScenarioKey>& scenario_keys();
bool is_scenario_key(std::string_view key);

/// Raw scenario as written in a file: annotated units, unvalidated.
class ScenarioSpec {
 public:
  /// Sets a key from its textual value. Throws ConfigError on an unknown key
  /// or unparsable value.
  void set(std::string_view key, std::string_view value);
  void set(std::string_view key, double value);
  void erase(std::string_view key);
  std::optional<double> get(std::string_view key) const;
  bool contains(std::string_view key) const { return get(key).has_value(); }

  /// Serializes in canonical key order; parse(serialize()) round-trips.
  std::string serialize() const;

 private:
  std::map<std::string, double, std::less<>> values_;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown or duplicate
/// keys are errors.
ScenarioSpec parse_scenario(std::string_view text);
ScenarioSpec load_scenario_file(const std::string& path);

/// Resolves alternates (visible count vs density, bandwidth vs noise power),
/// converts to SI and checks every invariant. Throws ConfigError listing all
/// violations.
ScenarioConfig validate(const ScenarioSpec& spec);

/// Parameter set of the reference evaluation: 550 km shell, 100 visible
/// satellites, 4.5 TBS/km^2, 1000 blockages/km^2 of 10 m x 10 m x 50 m.
ScenarioSpec reference_scenario();

}  // namespace istn
