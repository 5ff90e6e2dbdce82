#pragma once

#include <cmath>
#include <string>

#include "analytic_sat.hpp"
#include "analytic_ter.hpp"
#include "config.hpp"
#include "runner.hpp"

namespace istn::test {

inline ScenarioSpec preset_curve(const std::string& figure, const std::string& label) {
  for (const auto& c : figure_preset(figure).curves)
    if (c.label == label) return c.scenario;
  throw std::runtime_error("no curve " + label);
}

inline ScenarioConfig fig4_config() { return validate(reference_scenario()); }

inline ScenarioConfig fig2a_config(double ns, double h, double lambda_b_km2) {
  ScenarioSpec s = reference_scenario();
  s.set("sat_visible_count", ns);
  s.set("mean_height_m", h);
  s.set("mean_len_m", 20.0);
  s.set("mean_wid_m", 20.0);
  s.set("blockage_density_per_km2", lambda_b_km2);
  return validate(s);
}

inline ScenarioConfig fig3a_config(double lambda_t_km2, double lambda_b_km2) {
  ScenarioSpec s = reference_scenario();
  s.set("tbs_density_per_km2", lambda_t_km2);
  s.set("mean_len_m", 20.0);
  s.set("mean_wid_m", 20.0);
  s.set("blockage_density_per_km2", lambda_b_km2);
  return validate(s);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Richardson-extrapolated central differences for the k-th derivative,
// k <= 4, from step h and h/2.
template <class F>
double richardson_derivative(F&& f, double x, double h, int k) {
  auto central = [&](double step) {
    switch (k) {
      case 0:
        return f(x);
      case 1:
        return (f(x + step) - f(x - step)) / (2 * step);
      case 2:
        return (f(x + step) - 2 * f(x) + f(x - step)) / (step * step);
      case 3:
        return (f(x + 2 * step) - 2 * f(x + step) + 2 * f(x - step) - f(x - 2 * step)) / (2 * step * step * step);
      default:
        return (f(x + 2 * step) - 4 * f(x + step) + 6 * f(x) - 4 * f(x - step) + f(x - 2 * step)) /
               (step * step * step * step);
    }
  };
  const double coarse = central(h);
  const double fine = central(h / 2);
  return fine + (fine - coarse) / 3.0;
}

// sum_{k<n} (-w)^k f^(k)(s0) / k! with each derivative taken by Richardson
// differences at step rel_step * s0.
template <class F>
double richardson_taylor_sum(F&& f, double s0, int n, double weight, double rel_step) {
  double sum = 0.0, factorial = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) factorial *= k;
    sum += std::pow(-weight, k) * richardson_derivative(f, s0, rel_step * s0, k) / factorial;
  }
  return sum;
}

}  // namespace istn::test
