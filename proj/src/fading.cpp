#include "fading.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace istn {

GammaParams gamma_approx_sr(const ShadowedRicianParams& sr) {
  if (!(sr.m > 0.0) || !(sr.b0 >= 0.0) || !(sr.omega > 0.0))
    throw DomainError("shadowed-Rician parameters must be positive");
  const double mean = 2.0 * sr.b0 + sr.omega;
  const double q = 4.0 * sr.m * sr.b0 * sr.b0 + 4.0 * sr.m * sr.b0 * sr.omega + sr.omega * sr.omega;
  return {sr.m * mean * mean / q, q / (sr.m * mean)};
}

int rounded_shape(double m_s) {
  if (!(m_s > 0.0)) throw DomainError("Gamma shape must be positive");
  return std::max(1, static_cast<int>(std::lround(m_s)));
}

FadingSpec FadingSpec::gamma(GammaParams g) {
  if (!(g.shape > 0.0) || !(g.scale > 0.0)) throw DomainError("Gamma parameters must be positive");
  FadingSpec s;
  s.family_ = FadingFamily::GammaApproxSR;
  s.gamma_ = g;
  return s;
}

FadingSpec FadingSpec::nakagami(int m) {
  if (m < 1) throw DomainError("Nakagami m must be >= 1");
  FadingSpec s;
  s.family_ = FadingFamily::Nakagami;
  s.gamma_ = {static_cast<double>(m), 1.0 / m};
  return s;
}

FadingSpec FadingSpec::rayleigh() {
  FadingSpec s;
  s.family_ = FadingFamily::RayleighExp;
  return s;
}

FadingSpec FadingSpec::exact_sr(const ShadowedRicianParams& sr) {
  FadingSpec s;
  s.family_ = FadingFamily::ExactSR;
  s.gamma_ = gamma_approx_sr(sr);
  s.sr_ = sr;
  return s;
}

double FadingSpec::mean() const {
  switch (family_) {
    case FadingFamily::RayleighExp:
      return 1.0;
    case FadingFamily::ExactSR:
      return 2.0 * sr_.b0 + sr_.omega;
    default:
      return gamma_.shape * gamma_.scale;
  }
}

double laplace(const FadingSpec& spec, double t) {
  if (!(t >= 0.0)) throw DomainError("Laplace argument must be non-negative");
  switch (spec.family()) {
    case FadingFamily::ExactSR:
      throw DomainError("exact shadowed-Rician fading has no closed-form Laplace transform here");
    case FadingFamily::RayleighExp:
      return 1.0 / (1.0 + t);
    default: {
      const auto& g = spec.gamma_params();
      return std::pow(1.0 + t * g.scale, -g.shape);
    }
  }
}

Jet laplace(const FadingSpec& spec, const Jet& t) {
  switch (spec.family()) {
    case FadingFamily::ExactSR:
      throw DomainError("exact shadowed-Rician fading has no closed-form Laplace transform here");
    case FadingFamily::RayleighExp:
      return 1.0 / (1.0 + t);
    default: {
      const auto& g = spec.gamma_params();
      return pow(1.0 + t * g.scale, -g.shape);
    }
  }
}

FadingSampler::FadingSampler(const FadingSpec& spec)
    : spec_(spec),
      gamma_(spec.family() == FadingFamily::ExactSR ? spec.sr_params().m : spec.gamma_params().shape,
             spec.family() == FadingFamily::ExactSR ? spec.sr_params().omega / spec.sr_params().m
                                                     : spec.gamma_params().scale),
      normal_(0.0, spec.family() == FadingFamily::ExactSR ? std::sqrt(std::max(spec.sr_params().b0, 1e-300)) : 1.0),
      phase_(0.0, 2.0 * std::numbers::pi) {}

}  // namespace istn
