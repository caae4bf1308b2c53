#include "mvhyper/model.hpp"

#include <stdexcept>

#include "mvhyper/combinatorics.hpp"

namespace mvhyper {

namespace {

void require_shape(const Design& design, const CountGrid& x, const char* what) {
  if (x.rows() != design.subgroups || x.cols() != design.categories) {
    throw std::invalid_argument(std::string(what) + ": shape does not match design");
  }
}

bool in_first_stage_support(const Design& design, const PopulationMatrix& pop,
                            const CountGrid& x) {
  long long total = 0;
  for (int k = 0; k < x.size(); ++k) {
    const long long v = x.flat_at(k);
    if (v < 0 || v > pop.counts().flat_at(k)) return false;
    total += v;
  }
  return total == design.first_sample;
}

std::vector<long long> second_stage_bounds(const PopulationMatrix& pop, const CountGrid& x) {
  std::vector<long long> bounds(static_cast<std::size_t>(pop.subgroups()));
  for (int i = 0; i < pop.subgroups(); ++i) {
    bounds[static_cast<std::size_t>(i)] = pop.row_sums()[i] - x.row_sum(i);
  }
  return bounds;
}

}  // namespace

double pmf_first_stage(const Design& design, const PopulationMatrix& pop, const CountGrid& x) {
  design.validate();
  validate_population(design, pop);
  require_shape(design, x, "pmf_first_stage");

  long long total = 0;
  for (long long v : x.flat()) {
    if (v < 0) return 0.0;
    total += v;
  }
  if (total != design.first_sample) return 0.0;

  // The numerator never exceeds C(K, L) (its terms sum to it across the
  // support), so the exact product fits whenever the denominator does.
  unsigned __int128 numerator = 1;
  for (int k = 0; k < x.size(); ++k) {
    const long long stock = pop.counts().flat_at(k);
    const long long taken = x.flat_at(k);
    if (taken > stock) return 0.0;
    numerator *= binomial(stock, taken);
  }
  const unsigned long long denominator = binomial(design.population, design.first_sample);
  return static_cast<double>(static_cast<long double>(numerator) /
                             static_cast<long double>(denominator));
}

double pmf_second_stage(const Design& design, const PopulationMatrix& pop, const CountGrid& x,
                        const std::vector<long long>& y) {
  design.validate();
  validate_population(design, pop);
  require_shape(design, x, "pmf_second_stage");
  if (!in_first_stage_support(design, pop, x)) {
    throw std::invalid_argument("pmf_second_stage: x is not a first-stage support point");
  }
  if (static_cast<int>(y.size()) != design.subgroups) {
    throw std::invalid_argument("pmf_second_stage: y length does not match subgroups");
  }

  long long total = 0;
  for (long long v : y) {
    if (v < 0) return 0.0;
    total += v;
  }
  if (total != design.second_sample) return 0.0;

  const std::vector<long long> remaining = second_stage_bounds(pop, x);
  unsigned __int128 numerator = 1;
  for (int i = 0; i < design.subgroups; ++i) {
    const long long yi = y[static_cast<std::size_t>(i)];
    if (yi > remaining[static_cast<std::size_t>(i)]) return 0.0;
    numerator *= binomial(remaining[static_cast<std::size_t>(i)], yi);
  }
  const unsigned long long denominator =
      binomial(design.remaining_after_first(), design.second_sample);
  return static_cast<double>(static_cast<long double>(numerator) /
                             static_cast<long double>(denominator));
}

void visit_first_stage(const Design& design, const PopulationMatrix& pop,
                       const std::function<void(const CountGrid&)>& fn) {
  design.validate();
  validate_population(design, pop);

  std::vector<long long> bounds(pop.counts().flat().begin(), pop.counts().flat().end());
  BoundedCompositions comps(std::move(bounds), design.first_sample);
  CountGrid x(design.subgroups, design.categories);
  std::vector<long long> c;
  for (bool ok = comps.first(c); ok; ok = comps.next(c)) {
    for (int k = 0; k < x.size(); ++k) x.flat_at(k) = c[static_cast<std::size_t>(k)];
    fn(x);
  }
}

void visit_second_stage(const Design& design, const PopulationMatrix& pop, const CountGrid& x,
                        const std::function<void(const std::vector<long long>&)>& fn) {
  design.validate();
  validate_population(design, pop);
  require_shape(design, x, "visit_second_stage");
  if (!in_first_stage_support(design, pop, x)) {
    throw std::invalid_argument("visit_second_stage: x is not a first-stage support point");
  }

  BoundedCompositions comps(second_stage_bounds(pop, x), design.second_sample);
  std::vector<long long> y;
  for (bool ok = comps.first(y); ok; ok = comps.next(y)) {
    fn(y);
  }
}

std::vector<CountGrid> enumerate_first_stage(const Design& design, const PopulationMatrix& pop) {
  std::vector<CountGrid> out;
  visit_first_stage(design, pop, [&](const CountGrid& x) { out.push_back(x); });
  return out;
}

std::vector<std::vector<long long>> enumerate_second_stage(const Design& design,
                                                           const PopulationMatrix& pop,
                                                           const CountGrid& x) {
  std::vector<std::vector<long long>> out;
  visit_second_stage(design, pop, x, [&](const std::vector<long long>& y) { out.push_back(y); });
  return out;
}

unsigned long long first_stage_support_size(const Design& design, const PopulationMatrix& pop) {
  design.validate();
  validate_population(design, pop);
  std::vector<long long> bounds(pop.counts().flat().begin(), pop.counts().flat().end());
  return BoundedCompositions(std::move(bounds), design.first_sample).count();
}

TwoStageSample sample_two_stage(const Design& design, const PopulationMatrix& pop,
                                std::uint64_t seed) {
  Rng rng(seed);
  return sample_two_stage(design, pop, rng);
}

TwoStageSample sample_two_stage(const Design& design, const PopulationMatrix& pop, Rng& rng) {
  design.validate();
  validate_population(design, pop);

  const int cells = design.cells();
  CountGrid x(design.subgroups, design.categories);
  CountGrid latent(design.subgroups, design.categories);

  // First stage: condition each cell on the remaining draws and stock.
  long long stock_left = design.population;
  long long draws_left = design.first_sample;
  for (int k = 0; k < cells; ++k) {
    const long long cell_stock = pop.counts().flat_at(k);
    const long long taken = hypergeometric_draw(rng, stock_left, cell_stock, draws_left);
    x.flat_at(k) = taken;
    stock_left -= cell_stock;
    draws_left -= taken;
  }

  // Second stage: same splitting over the depleted stock.
  stock_left = design.remaining_after_first();
  draws_left = design.second_sample;
  for (int k = 0; k < cells; ++k) {
    const long long cell_stock = pop.counts().flat_at(k) - x.flat_at(k);
    const long long taken = hypergeometric_draw(rng, stock_left, cell_stock, draws_left);
    latent.flat_at(k) = taken;
    stock_left -= cell_stock;
    draws_left -= taken;
  }

  std::vector<long long> aggregated = latent.row_sums();
  return TwoStageSample{Observation(std::move(x), std::move(aggregated)),
                        LatentSecondStage{std::move(latent)}};
}

}  // namespace mvhyper
