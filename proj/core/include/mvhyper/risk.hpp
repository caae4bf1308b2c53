#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mvhyper/types.hpp"

namespace mvhyper {

enum class RiskMethod { exact, monte_carlo, semi_analytic };

/// Risks of the two Bayes rules against one population, their gap delta, and
/// the analytic bound (L'/n)(1 - 1/m)(K - 2L - L')/(K - 1) on that gap.
struct RiskReport {
  double risk_full = 0.0;
  double risk_xonly = 0.0;
  double delta = 0.0;
  double delta_bound = 0.0;
  RiskMethod method = RiskMethod::exact;
  std::optional<double> mc_std_error;  // std. error of delta (paired draws)
  std::optional<long long> replicates;
};

struct MonteCarloRisk {
  double value = 0.0;
  double std_error = 0.0;
};

struct ConditionalMoments {
  double mean = 0.0;
  double variance = 0.0;
};

using EstimatorRule = std::function<Estimate(const Observation&)>;

EstimatorRule make_full_rule(const Design& design, const PriorWeights& prior);
EstimatorRule make_xonly_rule(const Design& design, const PriorWeights& prior);

/// Sum of squared componentwise errors.
double squared_error(const Estimate& estimate, const PopulationMatrix& pop);

/// Exact frequentist risk of `rule` by full support enumeration
/// (lexicographic outer x, lexicographic inner y, compensated summation).
/// Throws ResourceLimitError when |supp X| * max|supp Y| exceeds 1e8.
double exact_risk(const Design& design, const PopulationMatrix& pop, const EstimatorRule& rule);

/// Monte Carlo risk over seeded two-stage draws. Deterministic given
/// (seed, replicates); replicates must be >= 2.
MonteCarloRisk mc_risk(const Design& design, const PopulationMatrix& pop,
                       const EstimatorRule& rule, long long replicates, std::uint64_t seed);

/// Mean and variance of a subgroup's second-stage count given the first
/// stage, as functions of that subgroup's remaining stock. Degenerate stages
/// (K - L <= 1) have zero variance.
ConditionalMoments conditional_y_moments(const Design& design, long long remaining);

/// Exact risk of the full-data rule under the symmetric prior, enumerating
/// only the first stage and resolving the second stage by its conditional
/// moments. Equals exact_risk of the full rule.
double semi_analytic_risk_full(const Design& design, const PopulationMatrix& pop);

/// E[(row total - first-stage row total)^2] in closed form; the first-stage
/// row totals are themselves a draw without replacement over subgroups.
double row_sum_second_moment(const Design& design, long long row_sum);

/// The risk gap of full-data vs first-stage-only Bayes rules under the
/// symmetric prior. Depends on the population only through its row sums.
/// Requires L <= K - 2 (UnsupportedDesignError otherwise; enumeration
/// remains available) and L' >= 1.
double closed_form_delta(const Design& design, const std::vector<long long>& row_sums);

/// (L'/n)(1 - 1/m)(K - 2L - L')/(K - 1): the sharp upper bound on the risk
/// gap, attained exactly at equal row sums.
double delta_bound(const Design& design);

/// Both exact risks in one support pass (same summation order as
/// exact_risk for each rule).
RiskReport exact_risk_report(const Design& design, const PriorWeights& prior,
                             const PopulationMatrix& pop);

/// Paired Monte Carlo: both rules evaluated on the same seeded draws, so the
/// reported std error is that of the risk difference.
RiskReport mc_risk_report(const Design& design, const PriorWeights& prior,
                          const PopulationMatrix& pop, long long replicates,
                          std::uint64_t seed);

/// Semi-analytic full-rule risk plus first-stage-enumerated x-only risk
/// (symmetric prior).
RiskReport semi_analytic_risk_report(const Design& design, const PopulationMatrix& pop);

}  // namespace mvhyper
