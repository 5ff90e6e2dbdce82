#pragma once

namespace istn {

enum class DbKind {
  Dbm,  // milliwatt-referenced power -> watts
  Dbi,  // antenna gain -> linear
  Db,   // plain ratio -> linear
};

/// Converts a decibel quantity to its linear SI value. Throws ConfigError on
/// non-finite input.
double from_db(double value_db, DbKind kind);
double to_db(double linear, DbKind kind);

/// Thermal noise power in watts for a bandwidth in hertz at -174 dBm/Hz.
double thermal_noise_watts(double bandwidth_hz);

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

/// Free-space reference constant (c / (4 pi f))^2 for a carrier in hertz.
double fspl_constant(double carrier_hz);

}  // namespace istn
