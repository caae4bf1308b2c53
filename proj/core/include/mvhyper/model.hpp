#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mvhyper/sampling.hpp"
#include "mvhyper/types.hpp"

namespace mvhyper {

/// P(X = x): product of per-cell binomials over C(K, L), evaluated with exact
/// integer combinatorics and a single final division. Returns 0 outside the
/// support (an entry above its population count, or a total other than L).
/// Throws std::invalid_argument on a shape mismatch.
double pmf_first_stage(const Design& design, const PopulationMatrix& pop, const CountGrid& x);

/// P(Y = y | X = x): product of per-subgroup binomials on the remaining
/// stock over C(K - L, L'). `x` must be a support point of the first stage,
/// otherwise std::invalid_argument. Returns 0 for infeasible y.
double pmf_second_stage(const Design& design, const PopulationMatrix& pop, const CountGrid& x,
                        const std::vector<long long>& y);

/// All first-stage support points, ascending lexicographic over the
/// flattened row-major cell index.
std::vector<CountGrid> enumerate_first_stage(const Design& design, const PopulationMatrix& pop);

/// All second-stage support points given x, ascending lexicographic.
std::vector<std::vector<long long>> enumerate_second_stage(const Design& design,
                                                           const PopulationMatrix& pop,
                                                           const CountGrid& x);

/// Streaming variants for large supports; visitation order matches the
/// enumerate_* functions.
void visit_first_stage(const Design& design, const PopulationMatrix& pop,
                       const std::function<void(const CountGrid&)>& fn);
void visit_second_stage(const Design& design, const PopulationMatrix& pop, const CountGrid& x,
                        const std::function<void(const std::vector<long long>&)>& fn);

/// Number of first-stage support points (no enumeration).
unsigned long long first_stage_support_size(const Design& design, const PopulationMatrix& pop);

struct TwoStageSample {
  Observation observation;
  LatentSecondStage latent;
};

/// Draws one two-stage sample by sequential conditional hypergeometric
/// splitting: first stage cell by cell over the flattened index, second
/// stage the same way from the depleted stock, then aggregated per subgroup.
/// Deterministic given the seed.
TwoStageSample sample_two_stage(const Design& design, const PopulationMatrix& pop,
                                std::uint64_t seed);

/// Same, drawing from a caller-owned stream (for replicated simulation).
TwoStageSample sample_two_stage(const Design& design, const PopulationMatrix& pop, Rng& rng);

}  // namespace mvhyper
