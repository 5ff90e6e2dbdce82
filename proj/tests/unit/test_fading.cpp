#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fading.hpp"
#include "rng.hpp"

using namespace istn;

namespace {

const ShadowedRicianParams kIls{19.0, 0.158, 1.29};

std::vector<double> draws(const FadingSpec& spec, int n, std::uint64_t seed) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    auto rng = trial_rng(seed, 0, i);
    out[i] = sample(spec, rng);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

std::vector<FadingSpec> closed_form_families() {
  return {FadingSpec::gamma_approx(kIls), FadingSpec::nakagami(1), FadingSpec::nakagami(2), FadingSpec::nakagami(5),
          FadingSpec::rayleigh()};
}

}  // namespace

TEST_CASE("Gamma approximation of shadowed-Rician power") {
  const auto g = gamma_approx_sr(kIls);
  CHECK(g.shape == doctest::Approx(2.5722).epsilon(5e-5));
  CHECK(g.scale == doctest::Approx(0.6244).epsilon(1e-4));
  const auto pure = gamma_approx_sr({4.0, 0.0, 2.0});
  CHECK(pure.shape == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(pure.scale == doctest::Approx(0.5).epsilon(1e-15));
  for (double m : {0.7, 2.0, 19.0})
    for (double b0 : {0.0, 0.063, 0.158, 1.0})
      for (double omega : {0.1, 1.29, 8.0}) {
        const auto p = gamma_approx_sr({m, b0, omega});
        CHECK(p.shape * p.scale == doctest::Approx(2 * b0 + omega).epsilon(1e-15));
      }
  CHECK_THROWS_AS(gamma_approx_sr({0.0, 0.1, 1.0}), DomainError);
}

TEST_CASE("rounded shape") {
  CHECK(rounded_shape(2.5722) == 3);
  CHECK(rounded_shape(2.5) == 3);
  CHECK(rounded_shape(1.0) == 1);
  CHECK(rounded_shape(0.3) == 1);
  CHECK(rounded_shape(gamma_approx_sr(kIls).shape) == 3);
  CHECK_THROWS_AS(rounded_shape(0.0), DomainError);
}

TEST_CASE("closed-form Laplace transforms") {
  for (const auto& f : closed_form_families()) CHECK(laplace(f, 0.0) == 1.0);
  CHECK(laplace(FadingSpec::rayleigh(), 1.0) == 0.5);
  CHECK(laplace(FadingSpec::nakagami(2), 2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(laplace(FadingSpec::exact_sr(kIls), 1.0), DomainError);
  CHECK_THROWS_AS(laplace(FadingSpec::rayleigh(), -1.0), DomainError);
}

TEST_CASE("Laplace transforms are decreasing and convex") {
  for (const auto& f : closed_form_families()) {
    std::vector<double> v;
    for (double t = 0.0; t <= 20.0; t += 0.25) v.push_back(laplace(f, t));
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] < v[i - 1]);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) CHECK(v[i - 1] - 2 * v[i] + v[i + 1] >= -1e-15);
  }
}

TEST_CASE("jet Laplace matches scalar Laplace") {
  for (const auto& f : closed_form_families()) {
    const Jet l = laplace(f, Jet::variable(0.8, 2));
    CHECK(l[0] == doctest::Approx(laplace(f, 0.8)).epsilon(1e-14));
    const double h = 1e-5;
    CHECK(l[1] == doctest::Approx((laplace(f, 0.8 + h) - laplace(f, 0.8 - h)) / (2 * h)).epsilon(1e-7));
  }
}

TEST_CASE("sample moments") {
  const int n = 1000000;
  const auto ray = draws(FadingSpec::rayleigh(), n, 11);
  CHECK(std::abs(mean(ray) - 1.0) <= 0.005);
  const auto nak = draws(FadingSpec::nakagami(2), n, 12);
  CHECK(std::abs(mean(nak) - 1.0) <= 0.005);
  CHECK(std::abs(variance(nak) - 0.5) <= 0.01);
  const auto sr = draws(FadingSpec::exact_sr(kIls), n, 13);
  CHECK(std::abs(mean(sr) - (2 * 0.158 + 1.29)) <= 0.01);
  for (double x : sr) REQUIRE(x >= 0.0);
}

TEST_CASE("exact shadowed-Rician against its Gamma approximation") {
  const auto exact = draws(FadingSpec::exact_sr(kIls), 100000, 21);
  const auto approx = draws(FadingSpec::gamma_approx(kIls), 100000, 22);
  CHECK(ks_distance(exact, approx) <= 0.05);
}

TEST_CASE("empirical Laplace transform") {
  const int n = 100000;
  for (const auto& f : closed_form_families()) {
    const auto x = draws(f, n, 31);
    for (double t : {0.1, 1.0, 10.0}) {
      std::vector<double> e(n);
      for (int i = 0; i < n; ++i) e[i] = std::exp(-t * x[i]);
      const double se = std::sqrt(variance(e) / n);
      CHECK(std::abs(mean(e) - laplace(f, t)) <= 3 * se);
    }
  }
}

TEST_CASE("sampling is reproducible") {
  auto a = trial_rng(5, 1, 99);
  auto b = trial_rng(5, 1, 99);
  const auto spec = FadingSpec::exact_sr(kIls);
  for (int i = 0; i < 10; ++i) CHECK(sample(spec, a) == sample(spec, b));
  auto c = trial_rng(5, 1, 100);
  auto d = trial_rng(5, 2, 99);
  CHECK(c() != trial_rng(5, 1, 99)());
  CHECK(d() != trial_rng(5, 1, 99)());
}
