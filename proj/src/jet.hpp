#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "errors.hpp"

namespace istn {

/// Truncated Taylor series in one variable around an expansion point s0.
///
/// Coefficient j holds f^(j)(s0) / j!. Arithmetic propagates the series
/// exactly up to `order()`, so derivatives come out free of truncation error.
/// Storage is inline; orders above kMaxOrder are rejected.
class Jet {
 public:
  static constexpr int kMaxOrder = 12;

  Jet() = default;
  explicit Jet(int order) : order_(checked(order)) {}

  static Jet constant(double c, int order) {
    Jet j(order);
    j.c_[0] = c;
    return j;
  }
  static Jet variable(double s0, int order) {
    Jet j(order);
    j.c_[0] = s0;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const { return order_; }
  double value() const { return c_[0]; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  std::span<const double> coeffs() const { return {c_.data(), static_cast<std::size_t>(order_) + 1}; }

  /// k-th derivative at the expansion point.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[k] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(double s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(double s) {
    for (int k = 0; k <= order_; ++k) c_[k] *= s;
    return *this;
  }
  Jet& operator/=(double s) { return *this *= 1.0 / s; }

  friend Jet operator-(Jet a) {
    for (int k = 0; k <= a.order_; ++k) a.c_[k] = -a.c_[k];
    return a;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.order_);
    for (int k = 0; k <= a.order_; ++k) {
      double acc = 0.0;
      for (int i = 0; i <= k; ++i) acc += a.c_[i] * b.c_[k - i];
      r.c_[k] = acc;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.c_[0] == 0.0) throw NumericalError("jet division by a series with zero constant term");
    Jet q(a.order_);
    for (int k = 0; k <= a.order_; ++k) {
      double acc = a.c_[k];
      for (int i = 1; i <= k; ++i) acc -= b.c_[i] * q.c_[k - i];
      q.c_[k] = acc / b.c_[0];
    }
    return q;
  }
  friend Jet operator/(double s, const Jet& b) { return constant(s, b.order_) / b; }

  friend Jet exp(const Jet& a) {
    Jet e(a.order_);
    e.c_[0] = std::exp(a.c_[0]);
    for (int k = 1; k <= a.order_; ++k) {
      double acc = 0.0;
      for (int i = 1; i <= k; ++i) acc += i * a.c_[i] * e.c_[k - i];
      e.c_[k] = acc / k;
    }
    return e;
  }

  friend Jet log(const Jet& a) {
    if (!(a.c_[0] > 0.0)) throw NumericalError("jet log of a non-positive series");
    Jet l(a.order_);
    l.c_[0] = std::log(a.c_[0]);
    for (int k = 1; k <= a.order_; ++k) {
      double acc = 0.0;
      for (int i = 1; i < k; ++i) acc += i * l.c_[i] * a.c_[k - i];
      l.c_[k] = (a.c_[k] - acc / k) / a.c_[0];
    }
    return l;
  }

  /// Real power a^r; requires a positive constant term.
  friend Jet pow(const Jet& a, double r) {
    if (!(a.c_[0] > 0.0)) throw NumericalError("jet pow of a non-positive series");
    Jet p(a.order_);
    p.c_[0] = std::pow(a.c_[0], r);
    for (int k = 1; k <= a.order_; ++k) {
      double acc = 0.0;
      for (int i = 1; i <= k; ++i) acc += ((r + 1.0) * i - k) * a.c_[i] * p.c_[k - i];
      p.c_[k] = acc / (k * a.c_[0]);
    }
    return p;
  }

 private:
  static int checked(int order) {
    if (order < 0 || order > kMaxOrder) throw DomainError("jet order out of range [0, 12]");
    return order;
  }

  int order_ = 0;
  std::array<double, kMaxOrder + 1> c_{};
};

/// f(s0), f'(s0), ..., f^(K)(s0) for a function written over jets.
std::vector<double> derivatives_at(const std::function<Jet(const Jet&)>& f, double s0, int order);

/// Sum_{k<=n} (-s0)^k / k! * f^(k)(s0), the finite series behind Gamma-CCDF
/// coverage expressions, evaluated from a jet expanded at s0.
double alternating_taylor_sum(const Jet& f_at_s0, double s0, int n);

}  // namespace istn
