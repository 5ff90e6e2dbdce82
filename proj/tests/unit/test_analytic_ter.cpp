#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "montecarlo.hpp"
#include "support.hpp"

using namespace istn;
using namespace istn::test;
using boost::math::quadrature::gauss_kronrod;

namespace {

TerTierModel reference_model(bool strict = false) { return TerTierModel::from_config(fig4_config(), strict); }

double gamma_ccdf_integer(int shape, double x) {
  double sum = 0.0, term = 1.0;
  for (int k = 0; k < shape; ++k) {
    if (k > 0) term *= x / k;
    sum += term;
  }
  return sum * std::exp(-x);
}

double noise_only_conditional(const TerTierModel& m, double r0, double tau) {
  const double p = ter_los_probability(m.blockage, r0);
  const double s_los = m.nakagami_m * std::pow(r0, m.alpha_los) * tau / m.serving_gain();
  const double s_nlos = std::pow(r0, m.alpha_nlos) * tau / m.serving_gain();
  return p * gamma_ccdf_integer(m.nakagami_m, s_los * m.noise) + (1 - p) * std::exp(-s_nlos * m.noise);
}

}  // namespace

TEST_CASE("nearest TBS distance") {
  for (double km2 : {0.385, 4.5, 29.0}) {
    const double lambda = km2 * 1e-6;
    auto pdf = [&](double r) { return nearest_tbs_pdf(lambda, r); };
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(gauss_kronrod<double, 61>::integrate(pdf, 0.0, inf, 15, 1e-13) == doctest::Approx(1.0).epsilon(1e-9));
    auto rpdf = [&](double r) { return r * nearest_tbs_pdf(lambda, r); };
    CHECK(gauss_kronrod<double, 61>::integrate(rpdf, 0.0, inf, 15, 1e-13) ==
          doctest::Approx(0.5 / std::sqrt(lambda)).epsilon(1e-9));
  }
  auto pdf = [](double r) { return nearest_tbs_pdf(4.5e-6, r); };
  CHECK(gauss_kronrod<double, 61>::integrate(pdf, 0.0, 221.4, 15, 1e-13) == doctest::Approx(0.5).epsilon(1e-4));
  const double dense = 1.0;
  auto near = [&](double r) { return nearest_tbs_pdf(dense, r); };
  CHECK(gauss_kronrod<double, 61>::integrate(near, 0.0, 2.0, 15, 1e-13) ==
        doctest::Approx(-std::expm1(-4 * std::numbers::pi)).epsilon(1e-12));
  CHECK_THROWS_AS(nearest_tbs_pdf(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(nearest_tbs_pdf(1e-6, -1.0), DomainError);
}

TEST_CASE("interference Laplace transform") {
  const auto m = reference_model();
  CHECK(ter_interference_laplace(m, 0.0, 100.0) == 1.0);
  auto empty = m;
  empty.lambda_t = 0.0;
  CHECK(ter_interference_laplace(empty, 1e12, 100.0) == 1.0);
  CHECK_THROWS_AS(ter_interference_laplace(m, -1.0, 100.0), DomainError);

  const double r_sim = default_r_sim(m);
  for (double r0 : {50.0, 200.0}) {
    const int n = 40000;
    double mean_i = 0.0;
    for (int i = 0; i < 2000; ++i) {
      auto rng = trial_rng(1, 7, i);
      mean_i += sample_ter_interference(m, r0, r_sim, rng) / 2000;
    }
    const double s = 1.0 / mean_i;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      auto rng = trial_rng(2, 7, i);
      const double e = std::exp(-s * sample_ter_interference(m, r0, r_sim, rng));
      sum += e;
      sq += e * e;
    }
    const double beyond = ter_interference_laplace(m, s, r_sim);
    const double mean = sum / n * beyond;
    const double se = std::sqrt((sq / n - sum * sum / n / n) / n) * beyond;
    INFO("r0 = " << r0);
    CHECK(std::abs(mean - ter_interference_laplace(m, s, r0)) <= 3 * se);
  }

  double prev = 2.0;
  for (double s : {0.0, 1e3, 1e6, 1e9, 1e12}) {
    const double l = ter_interference_laplace(m, s, 100.0);
    CHECK(l <= prev);
    prev = l;
  }
}

TEST_CASE("conditional coverage") {
  const auto m = reference_model();
  for (double r0 : {1.0, 50.0, 300.0}) CHECK(ter_conditional_coverage(m, r0, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(ter_conditional_coverage(m, 50.0, 0.0), DomainError);

  auto quiet = m;
  quiet.gain_side = 0.0;
  for (double r0 : {10.0, 100.0, 500.0})
    for (double tau : {0.1, 1.0, 10.0})
      CHECK(std::abs(ter_conditional_coverage(quiet, r0, tau) - noise_only_conditional(quiet, r0, tau)) <= 1e-12);

  const double p = ter_los_probability(m.blockage, 120.0);
  CHECK(ter_conditional_coverage(m, 120.0, 2.0) ==
        doctest::Approx(p * ter_branch_coverage(m, 120.0, 2.0, m.nakagami_m, m.alpha_los) +
                        (1 - p) * ter_branch_coverage(m, 120.0, 2.0, 1, m.alpha_nlos))
            .epsilon(1e-15));
  const double s_nlos = std::pow(120.0, m.alpha_nlos) * 2.0 / m.serving_gain();
  CHECK(ter_branch_coverage(m, 120.0, 2.0, 1, m.alpha_nlos) ==
        doctest::Approx(std::exp(-s_nlos * m.noise) * ter_interference_laplace(m, s_nlos, 120.0)).epsilon(1e-12));
}

TEST_CASE("finite sum against finite differences in both sum modes") {
  for (bool strict : {false, true}) {
    auto m = reference_model(strict);
    m.inner.abs_tol = 1e-15;
    m.inner.rel_tol = 1e-13;
    for (double r0 : {30.0, 150.0})
      for (double tau_db : {-5.0, 5.0}) {
        const double tau = db_to_linear(tau_db);
        for (int shape = 1; shape <= 4; ++shape) {
          const double s0 = shape * std::pow(r0, m.alpha_los) * tau / m.serving_gain();
          auto f = [&](double s) { return std::exp(-s * m.noise) * ter_interference_laplace(m, s, r0); };
          const double jet = ter_branch_coverage(m, r0, tau, shape, m.alpha_los);
          const double fd = richardson_taylor_sum(f, s0, shape, strict ? 1.0 : s0, shape <= 3 ? 1e-4 : 1e-3);
          INFO("strict " << strict << " r0 " << r0 << " tau " << tau_db << " shape " << shape);
          CHECK(jet == doctest::Approx(fd).epsilon(1e-5));
        }
      }
  }
}

TEST_CASE("sum modes agree for exponential serving fades") {
  const auto a = reference_model(false);
  const auto b = reference_model(true);
  for (double r0 : {30.0, 300.0})
    CHECK(ter_branch_coverage(a, r0, 1.0, 1, a.alpha_nlos) == ter_branch_coverage(b, r0, 1.0, 1, b.alpha_nlos));
}

TEST_CASE("coverage") {
  const auto m = reference_model();
  double prev = 2.0;
  for (int i = 0; i < 20; ++i) {
    const auto c = ter_coverage(m, db_to_linear(-10.0 + 2.0 * i));
    CHECK(c.coverage <= prev);
    CHECK(c.coverage >= 0.0);
    prev = c.coverage;
  }
  CHECK(ter_coverage(m, 1e-12).coverage == doctest::Approx(1.0).epsilon(1e-7));

  auto quiet = m;
  quiet.gain_side = 0.0;
  for (double tau_db : {-5.0, 5.0, 15.0}) {
    const double tau = db_to_linear(tau_db);
    auto f = [&](double r) { return nearest_tbs_pdf(m.lambda_t, r) * noise_only_conditional(quiet, r, tau); };
    const double oracle = gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-12);
    CHECK(ter_coverage(quiet, tau).coverage == doctest::Approx(oracle).epsilon(1e-7));
  }

  auto empty = m;
  empty.lambda_t = 0.0;
  CHECK(ter_coverage(empty, 1.0).coverage == 0.0);
}
