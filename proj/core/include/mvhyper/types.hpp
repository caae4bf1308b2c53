#pragma once

#include <vector>

#include "mvhyper/grid.hpp"

namespace mvhyper {

/// Known constants of a two-stage survey: a population of `population`
/// individuals split into `subgroups` subgroups of `categories` categories
/// each; `first_sample` draws are observed per category, then
/// `second_sample` draws from the remainder are observed per subgroup only.
struct Design {
  long long population = 0;     // K
  int subgroups = 0;            // m
  int categories = 0;           // n
  long long first_sample = 0;   // L
  long long second_sample = 0;  // L', may be 0 (degenerate second stage)

  int cells() const { return subgroups * categories; }
  long long remaining_after_first() const { return population - first_sample; }
  long long unsampled() const { return population - first_sample - second_sample; }

  /// Throws std::invalid_argument unless
  /// m, n >= 1, 1 <= L <= K, 0 <= L' <= K - L.
  void validate() const;
};

/// The unknown parameter: per-category counts of the whole population.
class PopulationMatrix {
public:
  explicit PopulationMatrix(CountGrid counts);

  const CountGrid& counts() const { return counts_; }
  const std::vector<long long>& row_sums() const { return row_sums_; }
  long long total() const { return total_; }

  int subgroups() const { return counts_.rows(); }
  int categories() const { return counts_.cols(); }

  friend bool operator==(const PopulationMatrix& a, const PopulationMatrix& b) {
    return a.counts_ == b.counts_;
  }

private:
  CountGrid counts_;
  std::vector<long long> row_sums_;
  long long total_ = 0;
};

/// Multinomial prior cell probabilities. Strictly positive, sum to 1.
class PriorWeights {
public:
  explicit PriorWeights(RealGrid probs);

  /// Equal weight 1/(m*n) in every cell.
  static PriorWeights symmetric(int subgroups, int categories);

  bool is_symmetric(double tol = 1e-12) const;

  const RealGrid& probs() const { return probs_; }
  const std::vector<double>& row_sums() const { return row_sums_; }

  int subgroups() const { return probs_.rows(); }
  int categories() const { return probs_.cols(); }

private:
  RealGrid probs_;
  std::vector<double> row_sums_;
};

/// What the analyst actually sees: per-category first-stage counts plus
/// subgroup totals of the second stage.
class Observation {
public:
  Observation(CountGrid first_stage, std::vector<long long> second_stage);

  const CountGrid& first_stage() const { return first_stage_; }
  const std::vector<long long>& first_stage_row_sums() const { return x_row_sums_; }
  const std::vector<long long>& second_stage() const { return second_stage_; }

  long long first_stage_total() const { return x_total_; }
  long long second_stage_total() const { return y_total_; }

private:
  CountGrid first_stage_;
  std::vector<long long> x_row_sums_;
  std::vector<long long> second_stage_;
  long long x_total_ = 0;
  long long y_total_ = 0;
};

/// Per-category second-stage counts. Never observed; the simulator exposes
/// them so the aggregation step itself can be tested.
struct LatentSecondStage {
  CountGrid counts;
};

/// A (real-valued) decision for the population matrix.
struct Estimate {
  RealGrid values;

  double total() const { return values.total(); }
};

/// Throws std::invalid_argument unless `pop` has the design's shape and its
/// entries sum to the design's population size.
void validate_population(const Design& design, const PopulationMatrix& pop);

/// Throws std::invalid_argument unless `prior` has the design's shape.
void validate_prior(const Design& design, const PriorWeights& prior);

/// Throws std::invalid_argument unless `obs` has the design's shape with
/// first-stage total L and second-stage total L'.
void validate_observation(const Design& design, const Observation& obs);

/// Simulation-context check: obs must be feasible against a known population
/// (componentwise x <= pop and y within the remaining row stock).
bool observation_feasible(const Design& design, const PopulationMatrix& pop,
                          const Observation& obs);

}  // namespace mvhyper
