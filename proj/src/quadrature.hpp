#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"

namespace istn {

enum class SemiInfinite {
  Transform,  // x = a + scale * (u / (1 - u))^2, u in [0, 1)
  Truncate,   // integrate [a, cutoff]
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 50;
  SemiInfinite semi_infinite = SemiInfinite::Transform;
  double cutoff = 0.0;  // Truncate only
  double scale = 1.0;   // Transform length scale
  int max_panels = 20000;
};

template <class T>
struct Quadrature {
  T value;
  double error = 0.0;  // largest per-component error estimate
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1]; odd indices are the Gauss nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline int width(double) { return 1; }
inline double component(double v, int) { return v; }
inline double& component_ref(double& v, int) { return v; }
inline double zero_like(double) { return 0.0; }

inline int width(const Jet& j) { return j.order() + 1; }
inline double component(const Jet& j, int k) { return j[k]; }
inline double& component_ref(Jet& j, int k) { return j[k]; }
inline Jet zero_like(const Jet& j) { return Jet(j.order()); }

template <class T>
struct Panel {
  double a;
  double b;
  T value;
  T error;
  double priority;
  int depth;
};

template <class T, class F>
Panel<T> gauss_kronrod_panel(F& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T fc = f(center);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    T f1 = f(center - dx);
    T f2 = f(center + dx);
    T sum = f1 + f2;
    kronrod += sum * kWgk[j];
    if (j % 2 == 1) gauss += sum * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  T err = zero_like(kronrod);
  for (int k = 0; k < width(kronrod); ++k)
    component_ref(err, k) = std::abs(component(kronrod, k) - component(gauss, k));
  return {a, b, kronrod, err, 0.0, depth};
}

template <class T, class F>
Quadrature<T> adaptive_finite(F& f, double a, double b, const QuadratureSpec& spec) {
  auto first = gauss_kronrod_panel<T>(f, a, b, 0);
  const int n = width(first.value);
  std::vector<double> scale(n);
  for (int k = 0; k < n; ++k) scale[k] = std::max(spec.abs_tol, spec.rel_tol * std::abs(component(first.value, k)));

  auto priority = [&](const T& err) {
    double p = 0.0;
    for (int k = 0; k < n; ++k) p = std::max(p, component(err, k) / scale[k]);
    return p;
  };
  first.priority = priority(first.error);

  auto cmp = [](const Panel<T>& x, const Panel<T>& y) { return x.priority < y.priority; };
  std::priority_queue<Panel<T>, std::vector<Panel<T>>, decltype(cmp)> queue(cmp);
  T total = first.value;
  T total_err = first.error;
  queue.push(std::move(first));

  auto converged = [&]() {
    for (int k = 0; k < n; ++k) {
      const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(component(total, k)));
      if (!(component(total_err, k) <= tol)) return false;
    }
    return true;
  };

  while (!converged()) {
    if (static_cast<int>(queue.size()) >= spec.max_panels)
      throw NumericalError("quadrature did not converge within the panel budget");
    Panel<T> worst = queue.top();
    if (worst.depth >= spec.max_depth)
      throw NumericalError("quadrature did not converge at max_depth " + std::to_string(spec.max_depth));
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = gauss_kronrod_panel<T>(f, worst.a, mid, worst.depth + 1);
    auto right = gauss_kronrod_panel<T>(f, mid, worst.b, worst.depth + 1);
    left.priority = priority(left.error);
    right.priority = priority(right.error);
    total -= worst.value;
    total_err -= worst.error;
    total += left.value;
    total += right.value;
    total_err += left.error;
    total_err += right.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
  }

  // Re-sum in positional order so the result does not depend on the running
  // update history.
  std::vector<Panel<T>> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  T value = zero_like(total);
  T error = zero_like(total);
  for (const auto& p : panels) {
    value += p.value;
    error += p.error;
  }
  for (int k = 0; k < n; ++k)
    if (!std::isfinite(component(value, k))) throw NumericalError("quadrature produced a non-finite value");
  double max_err = 0.0;
  for (int k = 0; k < n; ++k) max_err = std::max(max_err, component(error, k));
  return {value, max_err};
}

template <class T, class F>
Quadrature<T> integrate_any(F&& f, double a, double b, const QuadratureSpec& spec, T zero) {
  if (std::isnan(a) || std::isnan(b) || a > b) throw DomainError("integration bounds must satisfy a <= b");
  if (a == b) return {zero, 0.0};
  if (std::isinf(a)) throw DomainError("lower integration bound must be finite");
  if (std::isinf(b)) {
    if (spec.semi_infinite == SemiInfinite::Truncate) {
      if (!(spec.cutoff > a)) throw DomainError("truncation cutoff must exceed the lower bound");
      return adaptive_finite<T>(f, a, spec.cutoff, spec);
    }
    const double scale = spec.scale;
    auto mapped = [&](double u) -> T {
      const double r = u / (1.0 - u);
      const double x = a + scale * r * r;
      const double jac = scale * 2.0 * u / ((1.0 - u) * (1.0 - u) * (1.0 - u));
      if (!std::isfinite(x) || !std::isfinite(jac)) return zero;
      T v = f(x);
      v *= jac;
      return v;
    };
    return adaptive_finite<T>(mapped, 0.0, 1.0, spec);
  }
  return adaptive_finite<T>(f, a, b, spec);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration with global panel bisection.
/// `b` may be +infinity; the semi-infinite strategy in `spec` applies.
/// Throws NumericalError when tolerances cannot be met within max_depth.
template <class F>
Quadrature<double> integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  return detail::integrate_any<double>(std::forward<F>(f), a, b, spec, 0.0);
}

/// Coefficient-wise integral of a jet-valued integrand of uniform order.
template <class F>
Quadrature<Jet> integrate_jet(F&& f, double a, double b, const QuadratureSpec& spec, int order) {
  return detail::integrate_any<Jet>(std::forward<F>(f), a, b, spec, Jet(order));
}

}  // namespace istn
