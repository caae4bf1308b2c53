#pragma once

#include <cstdint>
#include <vector>

#include "mvhyper/sampling.hpp"
#include "mvhyper/types.hpp"

namespace mvhyper {

/// The posterior of the population matrix given an observation factorizes
/// into a subgroup-level multinomial over the unsampled individuals and one
/// within-subgroup multinomial per row. Packaging it makes the structure
/// directly sampleable.
struct PosteriorFactorization {
  long long outer_trials = 0;        // K - L - L'
  std::vector<double> outer_probs;   // prior row sums
  RealGrid inner_probs;              // prior cells normalized within each row
  CountGrid observed_first_stage;    // offsets mapping latent draws back to counts
  std::vector<long long> observed_second_stage;
};

/// Posterior mean of the population matrix given both stages:
/// x + (p_ij / p_i.) y_i + p_ij (K - L - L') per cell. Sums to K.
Estimate bayes_full(const Design& design, const PriorWeights& prior, const Observation& obs);

/// Posterior mean given the first stage only: x + p_ij (K - L). Sums to K.
Estimate bayes_xonly(const Design& design, const PriorWeights& prior, const CountGrid& x);

/// Exact normalized posterior log-mass of a candidate population matrix.
/// Returns -inf when the candidate is outside the posterior support (any
/// cell below its observed count, or a subgroup that cannot supply its
/// second-stage total).
double posterior_log_mass(const Design& design, const PriorWeights& prior,
                          const Observation& obs, const PopulationMatrix& pop);

PosteriorFactorization posterior_factorization(const Design& design, const PriorWeights& prior,
                                               const Observation& obs);

/// Draws a population matrix from the posterior: subgroup totals first, then
/// the within-subgroup split. The result always sums to K.
PopulationMatrix posterior_sample(const PosteriorFactorization& fact, std::uint64_t seed);
PopulationMatrix posterior_sample(const PosteriorFactorization& fact, Rng& rng);

}  // namespace mvhyper
