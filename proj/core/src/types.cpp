#include "mvhyper/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mvhyper {

void Design::validate() const {
  if (subgroups < 1) throw std::invalid_argument("design: subgroups must be >= 1");
  if (categories < 1) throw std::invalid_argument("design: categories must be >= 1");
  if (population < 1) throw std::invalid_argument("design: population must be >= 1");
  if (first_sample < 1 || first_sample > population) {
    throw std::invalid_argument("design: first_sample must satisfy 1 <= L <= K");
  }
  if (second_sample < 0 || second_sample > population - first_sample) {
    throw std::invalid_argument("design: second_sample must satisfy 0 <= L' <= K - L");
  }
}

PopulationMatrix::PopulationMatrix(CountGrid counts) : counts_(std::move(counts)) {
  if (counts_.rows() < 1 || counts_.cols() < 1) {
    throw std::invalid_argument("population: empty grid");
  }
  for (long long v : counts_.flat()) {
    if (v < 0) throw std::invalid_argument("population: negative count");
  }
  row_sums_ = counts_.row_sums();
  total_ = counts_.total();
}

PriorWeights::PriorWeights(RealGrid probs) : probs_(std::move(probs)) {
  if (probs_.rows() < 1 || probs_.cols() < 1) {
    throw std::invalid_argument("prior: empty grid");
  }
  double total = 0.0;
  for (double p : probs_.flat()) {
    if (!(p > 0.0) || p > 1.0) {
      throw std::invalid_argument("prior: weights must lie in (0, 1]");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("prior: weights must sum to 1 (tolerance 1e-12)");
  }
  row_sums_ = probs_.row_sums();
}

PriorWeights PriorWeights::symmetric(int subgroups, int categories) {
  if (subgroups < 1 || categories < 1) {
    throw std::invalid_argument("prior: subgroups and categories must be >= 1");
  }
  const double p = 1.0 / (static_cast<double>(subgroups) * static_cast<double>(categories));
  return PriorWeights(RealGrid(subgroups, categories, p));
}

bool PriorWeights::is_symmetric(double tol) const {
  const double p = 1.0 / static_cast<double>(probs_.size());
  for (double v : probs_.flat()) {
    if (std::abs(v - p) > tol) return false;
  }
  return true;
}

Observation::Observation(CountGrid first_stage, std::vector<long long> second_stage)
    : first_stage_(std::move(first_stage)), second_stage_(std::move(second_stage)) {
  if (first_stage_.rows() < 1 || first_stage_.cols() < 1) {
    throw std::invalid_argument("observation: empty first-stage grid");
  }
  if (static_cast<int>(second_stage_.size()) != first_stage_.rows()) {
    throw std::invalid_argument("observation: second-stage length must equal subgroup count");
  }
  for (long long v : first_stage_.flat()) {
    if (v < 0) throw std::invalid_argument("observation: negative first-stage count");
  }
  for (long long v : second_stage_) {
    if (v < 0) throw std::invalid_argument("observation: negative second-stage count");
    y_total_ += v;
  }
  x_row_sums_ = first_stage_.row_sums();
  x_total_ = first_stage_.total();
}

void validate_population(const Design& design, const PopulationMatrix& pop) {
  if (pop.subgroups() != design.subgroups || pop.categories() != design.categories) {
    throw std::invalid_argument("population: shape does not match design");
  }
  if (pop.total() != design.population) {
    throw std::invalid_argument("population: entries must sum to K=" +
                                std::to_string(design.population));
  }
}

void validate_prior(const Design& design, const PriorWeights& prior) {
  if (prior.subgroups() != design.subgroups || prior.categories() != design.categories) {
    throw std::invalid_argument("prior: shape does not match design");
  }
}

void validate_observation(const Design& design, const Observation& obs) {
  if (obs.first_stage().rows() != design.subgroups ||
      obs.first_stage().cols() != design.categories) {
    throw std::invalid_argument("observation: shape does not match design");
  }
  if (obs.first_stage_total() != design.first_sample) {
    throw std::invalid_argument("observation: first-stage counts must sum to L");
  }
  if (obs.second_stage_total() != design.second_sample) {
    throw std::invalid_argument("observation: second-stage counts must sum to L'");
  }
}

bool observation_feasible(const Design& design, const PopulationMatrix& pop,
                          const Observation& obs) {
  validate_observation(design, obs);
  validate_population(design, pop);
  for (int i = 0; i < design.subgroups; ++i) {
    for (int j = 0; j < design.categories; ++j) {
      if (obs.first_stage()(i, j) > pop.counts()(i, j)) return false;
    }
    const long long remaining = pop.row_sums()[i] - obs.first_stage_row_sums()[i];
    if (obs.second_stage()[i] > remaining) return false;
  }
  return true;
}

}  // namespace mvhyper
