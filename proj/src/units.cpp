#include "units.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace istn {

double from_db(double value_db, DbKind kind) {
  if (!std::isfinite(value_db)) throw ConfigError("value", "non-finite decibel value");
  const double linear = std::pow(10.0, value_db / 10.0);
  return kind == DbKind::Dbm ? linear * 1e-3 : linear;
}

double to_db(double linear, DbKind kind) {
  if (!std::isfinite(linear) || linear <= 0.0)
    throw ConfigError("value", "decibel conversion needs a positive finite value");
  const double scaled = kind == DbKind::Dbm ? linear * 1e3 : linear;
  return 10.0 * std::log10(scaled);
}

double thermal_noise_watts(double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
    throw ConfigError("bandwidth", "bandwidth must be positive and finite");
  return from_db(kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidth_hz), DbKind::Dbm);
}

double fspl_constant(double carrier_hz) {
  const double k = kSpeedOfLight / (4.0 * std::numbers::pi * carrier_hz);
  return k * k;
}

}  // namespace istn
