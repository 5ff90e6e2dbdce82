#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "analytic_sat.hpp"
#include "analytic_ter.hpp"
#include "rng.hpp"

namespace istn {

enum class SatLosMode {
  Bernoulli,     // independent thinning with the satellite LoS probability
  ExplicitPath,  // blockages drawn along the ground track of each link
};

enum class TerLosMode {
  Bernoulli,  // independent thinning with the terrestrial LoS probability
  Geometric,  // serving link tested against a sampled rectangle field
};

struct McOptions {
  std::uint64_t trials = 200000;
  std::uint64_t seed = 1;
  SatLosMode sat_los = SatLosMode::Bernoulli;
  TerLosMode ter_los = TerLosMode::Bernoulli;
  bool round_serving_shape = false;  // serving satellite fade Gamma(rounded m_s, beta_s)
  bool exact_sr = false;             // shadowed-Rician fades on every satellite link
  double r_sim = 0.0;                // terrestrial simulation radius; 0 picks a default
  bool tail_compensation = true;     // add the mean interference from beyond r_sim
  int threads = 0;                   // 0: ISTN_THREADS or hardware concurrency
};

struct McEstimate {
  double mean = 0.0;
  double half_width_95 = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

McEstimate make_estimate(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed);

struct TrialOutcome {
  bool covered = false;
  double sinr = 0.0;
  double serving = 0.0;  // geocentric angle or distance of the server
  bool had_los_server = false;
};

/// Geocentric angles of the satellites on the visible cap.
std::vector<double> sample_constellation(const SatTierModel& model, Xoshiro256& rng);

/// One link at geocentric angle psi with blockages drawn on its ground track.
/// Returns true when the link is LoS.
bool path_blockage_trial(const BlockageModel& blockage, const SatGeometry& g, double psi, Xoshiro256& rng);

/// One user-TBS link of ground length r against a Poisson field of rectangles
/// with uniform orientation and Rayleigh heights. Returns true when LoS.
bool planar_boolean_los_trial(const BlockageModel& field, double r, double h_tbs, Xoshiro256& rng);

/// Worker count from ISTN_THREADS (or hardware concurrency) and `requested`.
int worker_count(int requested);

/// Default terrestrial simulation radius for a model.
double default_r_sim(const TerTierModel& model);

/// Mean interference from TBSs beyond r_sim (unit-mean fades).
double ter_tail_interference(const TerTierModel& model, double r_sim);

/// Per-trial samplers. `tau` decides `covered` only.
TrialOutcome sat_trial(const SatTierModel& model, double tau, const McOptions& opt, Xoshiro256& rng);
TrialOutcome ter_trial(const TerTierModel& model, double tau, const McOptions& opt, double r_sim, double tail,
                       Xoshiro256& rng);

/// Satellite interference from LoS satellites beyond psi_s (side-lobe gain).
double sample_sat_interference(const SatTierModel& model, double psi_s, const McOptions& opt, Xoshiro256& rng);
/// SINR with the serving satellite pinned at psi_s.
double sample_sat_sinr_at(const SatTierModel& model, double psi_s, const McOptions& opt, Xoshiro256& rng);
/// Terrestrial interference from TBSs beyond r0 inside r_sim (no tail term).
double sample_ter_interference(const TerTierModel& model, double r0, double r_sim, Xoshiro256& rng);

std::vector<McEstimate> mc_sat_coverage(const SatTierModel& model, std::span<const double> taus, const McOptions& opt);
std::vector<McEstimate> mc_ter_coverage(const TerTierModel& model, std::span<const double> taus, const McOptions& opt);
std::vector<McEstimate> mc_istn_coverage(const SatTierModel& sat, const TerTierModel& ter, std::span<const double> taus,
                                         const McOptions& opt);

McEstimate mc_sat_coverage(const SatTierModel& model, double tau, const McOptions& opt);
McEstimate mc_ter_coverage(const TerTierModel& model, double tau, const McOptions& opt);
McEstimate mc_istn_coverage(const SatTierModel& sat, const TerTierModel& ter, double tau, const McOptions& opt);

/// All three tiers from one set of trials; the ISTN trial combines the tier
/// trials with the same index.
struct McTierSet {
  std::vector<McEstimate> sat;
  std::vector<McEstimate> ter;
  std::vector<McEstimate> istn;
};
McTierSet mc_all_coverage(const SatTierModel& sat, const TerTierModel& ter, std::span<const double> taus,
                          const McOptions& opt);

}  // namespace istn
