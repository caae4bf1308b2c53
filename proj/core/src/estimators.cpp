#include "mvhyper/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mvhyper/combinatorics.hpp"

namespace mvhyper {

Estimate bayes_full(const Design& design, const PriorWeights& prior, const Observation& obs) {
  design.validate();
  validate_prior(design, prior);
  validate_observation(design, obs);

  const double unsampled = static_cast<double>(design.unsampled());
  RealGrid values(design.subgroups, design.categories);
  for (int i = 0; i < design.subgroups; ++i) {
    const double row_mass = prior.row_sums()[i];
    const double aggregated = static_cast<double>(obs.second_stage()[i]);
    for (int j = 0; j < design.categories; ++j) {
      const double p = prior.probs()(i, j);
      values(i, j) = static_cast<double>(obs.first_stage()(i, j)) +
                     (p / row_mass) * aggregated + p * unsampled;
    }
  }
  return Estimate{std::move(values)};
}

Estimate bayes_xonly(const Design& design, const PriorWeights& prior, const CountGrid& x) {
  design.validate();
  validate_prior(design, prior);
  if (x.rows() != design.subgroups || x.cols() != design.categories) {
    throw std::invalid_argument("bayes_xonly: shape does not match design");
  }
  long long total = 0;
  for (long long v : x.flat()) {
    if (v < 0) throw std::invalid_argument("bayes_xonly: negative count");
    total += v;
  }
  if (total != design.first_sample) {
    throw std::invalid_argument("bayes_xonly: first-stage counts must sum to L");
  }

  const double residual = static_cast<double>(design.population - design.first_sample);
  RealGrid values(design.subgroups, design.categories);
  for (int i = 0; i < design.subgroups; ++i) {
    for (int j = 0; j < design.categories; ++j) {
      values(i, j) = static_cast<double>(x(i, j)) + prior.probs()(i, j) * residual;
    }
  }
  return Estimate{std::move(values)};
}

double posterior_log_mass(const Design& design, const PriorWeights& prior,
                          const Observation& obs, const PopulationMatrix& pop) {
  design.validate();
  validate_prior(design, prior);
  validate_observation(design, obs);
  validate_population(design, pop);

  const double neg_inf = -std::numeric_limits<double>::infinity();

  // Latent cell counts beyond the first stage, and subgroup counts beyond
  // both stages. Either going negative kills the mass.
  std::vector<long long> unseen_rows(static_cast<std::size_t>(design.subgroups));
  std::vector<long long> unseen_cells(static_cast<std::size_t>(design.cells()));
  for (int i = 0; i < design.subgroups; ++i) {
    for (int j = 0; j < design.categories; ++j) {
      const long long d = pop.counts()(i, j) - obs.first_stage()(i, j);
      if (d < 0) return neg_inf;
      unseen_cells[static_cast<std::size_t>(i * design.categories + j)] = d;
    }
    const long long r =
        pop.row_sums()[i] - obs.first_stage_row_sums()[i] - obs.second_stage()[i];
    if (r < 0) return neg_inf;
    unseen_rows[static_cast<std::size_t>(i)] = r;
  }

  double log_mass = log_multinomial_pmf(design.unsampled(), unseen_rows, prior.row_sums());
  std::vector<double> inner(static_cast<std::size_t>(design.categories));
  std::vector<long long> cells(static_cast<std::size_t>(design.categories));
  for (int i = 0; i < design.subgroups; ++i) {
    const double row_mass = prior.row_sums()[i];
    for (int j = 0; j < design.categories; ++j) {
      inner[static_cast<std::size_t>(j)] = prior.probs()(i, j) / row_mass;
      cells[static_cast<std::size_t>(j)] =
          unseen_cells[static_cast<std::size_t>(i * design.categories + j)];
    }
    const long long trials = obs.second_stage()[i] + unseen_rows[static_cast<std::size_t>(i)];
    log_mass += log_multinomial_pmf(trials, cells, inner);
  }
  return log_mass;
}

PosteriorFactorization posterior_factorization(const Design& design, const PriorWeights& prior,
                                               const Observation& obs) {
  design.validate();
  validate_prior(design, prior);
  validate_observation(design, obs);

  PosteriorFactorization fact;
  fact.outer_trials = design.unsampled();
  fact.outer_probs = prior.row_sums();
  fact.inner_probs = RealGrid(design.subgroups, design.categories);
  for (int i = 0; i < design.subgroups; ++i) {
    for (int j = 0; j < design.categories; ++j) {
      fact.inner_probs(i, j) = prior.probs()(i, j) / prior.row_sums()[i];
    }
  }
  fact.observed_first_stage = obs.first_stage();
  fact.observed_second_stage = obs.second_stage();
  return fact;
}

PopulationMatrix posterior_sample(const PosteriorFactorization& fact, std::uint64_t seed) {
  Rng rng(seed);
  return posterior_sample(fact, rng);
}

PopulationMatrix posterior_sample(const PosteriorFactorization& fact, Rng& rng) {
  if (fact.outer_trials < 0) {
    throw std::invalid_argument("posterior_sample: negative outer trial count");
  }
  const int m = fact.inner_probs.rows();
  const int n = fact.inner_probs.cols();

  const std::vector<long long> unseen_rows =
      multinomial_draw(rng, fact.outer_trials, fact.outer_probs);

  CountGrid counts(m, n);
  std::vector<double> inner(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) inner[static_cast<std::size_t>(j)] = fact.inner_probs(i, j);
    const long long trials =
        fact.observed_second_stage[static_cast<std::size_t>(i)] +
        unseen_rows[static_cast<std::size_t>(i)];
    const std::vector<long long> row = multinomial_draw(rng, trials, inner);
    for (int j = 0; j < n; ++j) {
      counts(i, j) = fact.observed_first_stage(i, j) + row[static_cast<std::size_t>(j)];
    }
  }
  return PopulationMatrix(std::move(counts));
}

}  // namespace mvhyper
