#pragma once

#include <random>

#include "config.hpp"
#include "jet.hpp"

namespace istn {

enum class FadingFamily {
  GammaApproxSR,  // Gamma(shape, scale) moment match of shadowed-Rician power
  Nakagami,       // Gamma(m, 1/m), unit mean
  RayleighExp,    // Exp(1)
  ExactSR,        // |sqrt(w) e^{j phi} + z|^2, w ~ Gamma(m, Omega/m), z ~ CN(0, 2 b0)
};

/// Shape/scale of a Gamma power law.
struct GammaParams {
  double shape = 1.0;
  double scale = 1.0;
};

/// Moment-matched Gamma approximation (m_s, beta_s) of shadowed-Rician power.
GammaParams gamma_approx_sr(const ShadowedRicianParams& sr);

/// Nearest integer to m_s, ties away from zero, at least 1.
int rounded_shape(double m_s);

class FadingSpec {
 public:
  static FadingSpec gamma(GammaParams g);
  static FadingSpec gamma_approx(const ShadowedRicianParams& sr) { return gamma(gamma_approx_sr(sr)); }
  static FadingSpec nakagami(int m);
  static FadingSpec rayleigh();
  static FadingSpec exact_sr(const ShadowedRicianParams& sr);

  FadingFamily family() const { return family_; }
  const GammaParams& gamma_params() const { return gamma_; }
  const ShadowedRicianParams& sr_params() const { return sr_; }
  double mean() const;

 private:
  FadingFamily family_ = FadingFamily::RayleighExp;
  GammaParams gamma_;
  ShadowedRicianParams sr_;
};

/// E[exp(-t H)] of the fading power. ExactSR has no closed form here and is
/// rejected with DomainError.
double laplace(const FadingSpec& spec, double t);
Jet laplace(const FadingSpec& spec, const Jet& t);

/// Draws fading powers from `rng`. The underlying std distributions cache
/// state between calls, so Monte Carlo code builds one sampler per trial.
class FadingSampler {
 public:
  explicit FadingSampler(const FadingSpec& spec);

  template <class Rng>
  double operator()(Rng& rng) {
    switch (spec_.family()) {
      case FadingFamily::ExactSR: {
        const double w = gamma_(rng);
        const double phi = phase_(rng);
        const double re = std::sqrt(w) * std::cos(phi) + normal_(rng);
        const double im = std::sqrt(w) * std::sin(phi) + normal_(rng);
        return re * re + im * im;
      }
      case FadingFamily::RayleighExp:
        return exponential_(rng);
      default:
        return gamma_(rng);
    }
  }

  const FadingSpec& spec() const { return spec_; }

 private:
  FadingSpec spec_;
  std::gamma_distribution<double> gamma_;
  std::exponential_distribution<double> exponential_{1.0};
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> phase_;
};

template <class Rng>
double sample(const FadingSpec& spec, Rng& rng) {
  FadingSampler s(spec);
  return s(rng);
}

}  // namespace istn
