#include "mvhyper/risk.hpp"

#include <cmath>
#include <stdexcept>

#include "mvhyper/combinatorics.hpp"
#include "mvhyper/errors.hpp"
#include "mvhyper/kahan.hpp"
#include "mvhyper/model.hpp"

namespace mvhyper {

namespace {

constexpr unsigned long long kSupportGuard = 100'000'000ULL;

void check_support_guard(const Design& design, const PopulationMatrix& pop) {
  unsigned long long x_points = 0;
  unsigned long long y_points = 0;
  try {
    std::vector<long long> bounds(pop.counts().flat().begin(), pop.counts().flat().end());
    x_points = BoundedCompositions(std::move(bounds), design.first_sample).count();
    std::vector<long long> y_bounds(static_cast<std::size_t>(design.subgroups),
                                    design.second_sample);
    y_points = BoundedCompositions(std::move(y_bounds), design.second_sample).count();
  } catch (const std::overflow_error&) {
    throw ResourceLimitError("exact enumeration: support size exceeds 64 bits");
  }
  if (y_points != 0 && x_points > kSupportGuard / y_points) {
    throw ResourceLimitError("exact enumeration: |supp X| * max|supp Y| exceeds 1e8");
  }
}

// Per-point first-stage probability against a prebuilt binomial table
// (exact integer products, one final division).
class FirstStagePmf {
public:
  FirstStagePmf(const Design& design, const PopulationMatrix& pop)
      : pop_(pop), table_(std::min<long long>(design.population, 67)) {
    denom_ = static_cast<long double>(binomial(design.population, design.first_sample));
  }

  double operator()(const std::vector<long long>& x) const {
    unsigned __int128 numerator = 1;
    for (std::size_t k = 0; k < x.size(); ++k) {
      numerator *= table_.at(pop_.counts().flat_at(static_cast<int>(k)), x[k]);
    }
    return static_cast<double>(static_cast<long double>(numerator) / denom_);
  }

private:
  const PopulationMatrix& pop_;
  BinomialTable table_;
  long double denom_;
};

}  // namespace

EstimatorRule make_full_rule(const Design& design, const PriorWeights& prior) {
  design.validate();
  validate_prior(design, prior);
  return [design, prior](const Observation& obs) { return bayes_full(design, prior, obs); };
}

EstimatorRule make_xonly_rule(const Design& design, const PriorWeights& prior) {
  design.validate();
  validate_prior(design, prior);
  return [design, prior](const Observation& obs) {
    return bayes_xonly(design, prior, obs.first_stage());
  };
}

double squared_error(const Estimate& estimate, const PopulationMatrix& pop) {
  if (estimate.values.rows() != pop.subgroups() ||
      estimate.values.cols() != pop.categories()) {
    throw std::invalid_argument("squared_error: shape mismatch");
  }
  double loss = 0.0;
  for (int k = 0; k < estimate.values.size(); ++k) {
    const double d = estimate.values.flat_at(k) - static_cast<double>(pop.counts().flat_at(k));
    loss += d * d;
  }
  return loss;
}

double exact_risk(const Design& design, const PopulationMatrix& pop, const EstimatorRule& rule) {
  design.validate();
  validate_population(design, pop);
  check_support_guard(design, pop);

  const FirstStagePmf pmf_x(design, pop);
  const long double y_denom =
      static_cast<long double>(binomial(design.remaining_after_first(), design.second_sample));
  BinomialTable table(std::min<long long>(design.population, 67));

  std::vector<long long> x_bounds(pop.counts().flat().begin(), pop.counts().flat().end());
  BoundedCompositions x_comps(std::move(x_bounds), design.first_sample);

  const int m = design.subgroups;
  const int n = design.categories;
  KahanSum risk;
  std::vector<long long> x;
  std::vector<long long> remaining(static_cast<std::size_t>(m));
  for (bool ok = x_comps.first(x); ok; ok = x_comps.next(x)) {
    const double px = pmf_x(x);
    CountGrid x_grid(m, n);
    for (int k = 0; k < x_grid.size(); ++k) x_grid.flat_at(k) = x[static_cast<std::size_t>(k)];
    for (int i = 0; i < m; ++i) {
      remaining[static_cast<std::size_t>(i)] = pop.row_sums()[i] - x_grid.row_sum(i);
    }

    BoundedCompositions y_comps(remaining, design.second_sample);
    std::vector<long long> y;
    for (bool oky = y_comps.first(y); oky; oky = y_comps.next(y)) {
      unsigned __int128 numerator = 1;
      for (int i = 0; i < m; ++i) {
        numerator *= table.at(remaining[static_cast<std::size_t>(i)],
                              y[static_cast<std::size_t>(i)]);
      }
      const double py =
          static_cast<double>(static_cast<long double>(numerator) / y_denom);
      const Observation obs(x_grid, y);
      risk.add(px * py * squared_error(rule(obs), pop));
    }
  }
  return risk.value();
}

MonteCarloRisk mc_risk(const Design& design, const PopulationMatrix& pop,
                       const EstimatorRule& rule, long long replicates, std::uint64_t seed) {
  design.validate();
  validate_population(design, pop);
  if (replicates < 2) throw std::invalid_argument("mc_risk: replicates must be >= 2");

  Rng rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (long long r = 0; r < replicates; ++r) {
    const TwoStageSample sample = sample_two_stage(design, pop, rng);
    const double loss = squared_error(rule(sample.observation), pop);
    const double delta = loss - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (loss - mean);
  }
  const double variance = m2 / static_cast<double>(replicates - 1);
  return MonteCarloRisk{mean, std::sqrt(variance / static_cast<double>(replicates))};
}

ConditionalMoments conditional_y_moments(const Design& design, long long remaining) {
  design.validate();
  const long long pool = design.remaining_after_first();
  if (remaining < 0 || remaining > pool) {
    throw std::invalid_argument("conditional_y_moments: remaining stock out of [0, K - L]");
  }
  if (pool == 0) return ConditionalMoments{0.0, 0.0};

  const double draws = static_cast<double>(design.second_sample);
  const double r = static_cast<double>(remaining);
  const double p = static_cast<double>(pool);
  const double mean = draws * r / p;
  if (pool == 1) return ConditionalMoments{mean, 0.0};
  const double variance =
      draws * static_cast<double>(pool - design.second_sample) / (p * p * (p - 1.0)) * r *
      (p - r);
  return ConditionalMoments{mean, variance};
}

double semi_analytic_risk_full(const Design& design, const PopulationMatrix& pop) {
  design.validate();
  validate_population(design, pop);
  check_support_guard(design, pop);

  const FirstStagePmf pmf_x(design, pop);
  const int m = design.subgroups;
  const int n = design.categories;
  const double cell_share =
      static_cast<double>(design.unsampled()) / static_cast<double>(design.cells());
  const double n_real = static_cast<double>(n);

  std::vector<long long> x_bounds(pop.counts().flat().begin(), pop.counts().flat().end());
  BoundedCompositions x_comps(std::move(x_bounds), design.first_sample);

  KahanSum risk;
  std::vector<long long> x;
  for (bool ok = x_comps.first(x); ok; ok = x_comps.next(x)) {
    const double px = pmf_x(x);
    double conditional = 0.0;
    for (int i = 0; i < m; ++i) {
      long long row_taken = 0;
      for (int j = 0; j < n; ++j) row_taken += x[static_cast<std::size_t>(i * n + j)];
      const ConditionalMoments mom =
          conditional_y_moments(design, pop.row_sums()[i] - row_taken);
      for (int j = 0; j < n; ++j) {
        const double centered = mom.mean / n_real +
                                static_cast<double>(x[static_cast<std::size_t>(i * n + j)]) +
                                cell_share - static_cast<double>(pop.counts()(i, j));
        conditional += mom.variance / (n_real * n_real) + centered * centered;
      }
    }
    risk.add(px * conditional);
  }
  return risk.value();
}

double row_sum_second_moment(const Design& design, long long row_sum) {
  design.validate();
  if (design.population < 2) {
    throw std::invalid_argument("row_sum_second_moment: needs K >= 2");
  }
  if (row_sum < 0 || row_sum > design.population) {
    throw std::invalid_argument("row_sum_second_moment: row sum out of [0, K]");
  }
  const double k = static_cast<double>(design.population);
  const double l = static_cast<double>(design.first_sample);
  const double s = static_cast<double>(row_sum);
  const double quad = (k - l) * ((k - 1.0) * (k - l) - l) / (k * k * (k - 1.0));
  const double lin = l * (k - l) / (k * (k - 1.0));
  return quad * s * s + lin * s;
}

double closed_form_delta(const Design& design, const std::vector<long long>& row_sums) {
  design.validate();
  if (design.second_sample < 1) {
    throw std::invalid_argument("closed_form_delta: needs L' >= 1");
  }
  if (design.first_sample > design.population - 2) {
    throw UnsupportedDesignError(
        "closed_form_delta: needs L <= K - 2 (use exact enumeration instead)");
  }
  if (static_cast<int>(row_sums.size()) != design.subgroups) {
    throw std::invalid_argument("closed_form_delta: row sum count must equal subgroups");
  }
  long long total = 0;
  for (long long s : row_sums) {
    if (s < 0) throw std::invalid_argument("closed_form_delta: negative row sum");
    total += s;
  }
  if (total != design.population) {
    throw std::invalid_argument("closed_form_delta: row sums must total K");
  }

  const double pool = static_cast<double>(design.remaining_after_first());  // K - L
  const double draws = static_cast<double>(design.second_sample);           // L'
  const double leftover = static_cast<double>(design.unsampled());          // K - L - L'
  const double tail = leftover / (pool - 1.0);
  const double shrink = 2.0 * pool - draws + tail;
  const double offset = (2.0 * pool - draws) / static_cast<double>(design.subgroups) + tail;

  KahanSum second_moment;
  for (long long s : row_sums) second_moment.add(row_sum_second_moment(design, s));

  return draws / static_cast<double>(design.categories) *
         (-shrink * second_moment.value() / (pool * pool) + offset);
}

double delta_bound(const Design& design) {
  design.validate();
  if (design.population < 2) throw std::invalid_argument("delta_bound: needs K >= 2");
  const double k = static_cast<double>(design.population);
  const double m = static_cast<double>(design.subgroups);
  const double n = static_cast<double>(design.categories);
  const double l = static_cast<double>(design.first_sample);
  const double lp = static_cast<double>(design.second_sample);
  return lp / n * (1.0 - 1.0 / m) * (k - 2.0 * l - lp) / (k - 1.0);
}

RiskReport exact_risk_report(const Design& design, const PriorWeights& prior,
                             const PopulationMatrix& pop) {
  design.validate();
  validate_prior(design, prior);
  validate_population(design, pop);
  check_support_guard(design, pop);

  const FirstStagePmf pmf_x(design, pop);
  const long double y_denom =
      static_cast<long double>(binomial(design.remaining_after_first(), design.second_sample));
  BinomialTable table(std::min<long long>(design.population, 67));

  const int m = design.subgroups;
  const int n = design.categories;
  const double unsampled = static_cast<double>(design.unsampled());
  const double residual = static_cast<double>(design.population - design.first_sample);

  std::vector<long long> x_bounds(pop.counts().flat().begin(), pop.counts().flat().end());
  BoundedCompositions x_comps(std::move(x_bounds), design.first_sample);

  KahanSum risk_full;
  KahanSum risk_xonly;
  std::vector<long long> x;
  std::vector<long long> remaining(static_cast<std::size_t>(m));
  for (bool ok = x_comps.first(x); ok; ok = x_comps.next(x)) {
    const double px = pmf_x(x);

    double loss_xonly = 0.0;
    for (int i = 0; i < m; ++i) {
      long long row_taken = 0;
      for (int j = 0; j < n; ++j) {
        const std::size_t k = static_cast<std::size_t>(i * n + j);
        row_taken += x[k];
        const double est = static_cast<double>(x[k]) + prior.probs()(i, j) * residual;
        const double d = est - static_cast<double>(pop.counts()(i, j));
        loss_xonly += d * d;
      }
      remaining[static_cast<std::size_t>(i)] = pop.row_sums()[i] - row_taken;
    }
    risk_xonly.add(px * loss_xonly);

    BoundedCompositions y_comps(remaining, design.second_sample);
    std::vector<long long> y;
    for (bool oky = y_comps.first(y); oky; oky = y_comps.next(y)) {
      unsigned __int128 numerator = 1;
      for (int i = 0; i < m; ++i) {
        numerator *= table.at(remaining[static_cast<std::size_t>(i)],
                              y[static_cast<std::size_t>(i)]);
      }
      const double py = static_cast<double>(static_cast<long double>(numerator) / y_denom);

      double loss_full = 0.0;
      for (int i = 0; i < m; ++i) {
        const double aggregated = static_cast<double>(y[static_cast<std::size_t>(i)]);
        const double row_mass = prior.row_sums()[i];
        for (int j = 0; j < n; ++j) {
          const std::size_t k = static_cast<std::size_t>(i * n + j);
          const double p = prior.probs()(i, j);
          const double est =
              static_cast<double>(x[k]) + (p / row_mass) * aggregated + p * unsampled;
          const double d = est - static_cast<double>(pop.counts()(i, j));
          loss_full += d * d;
        }
      }
      risk_full.add(px * py * loss_full);
    }
  }

  RiskReport report;
  report.risk_full = risk_full.value();
  report.risk_xonly = risk_xonly.value();
  report.delta = report.risk_full - report.risk_xonly;
  report.delta_bound = delta_bound(design);
  report.method = RiskMethod::exact;
  return report;
}

RiskReport mc_risk_report(const Design& design, const PriorWeights& prior,
                          const PopulationMatrix& pop, long long replicates,
                          std::uint64_t seed) {
  design.validate();
  validate_prior(design, prior);
  validate_population(design, pop);
  if (replicates < 2) throw std::invalid_argument("mc_risk_report: replicates must be >= 2");

  Rng rng(seed);
  double mean_full = 0.0;
  double mean_xonly = 0.0;
  double mean_gap = 0.0;
  double m2_gap = 0.0;
  for (long long r = 0; r < replicates; ++r) {
    const TwoStageSample sample = sample_two_stage(design, pop, rng);
    const double loss_full =
        squared_error(bayes_full(design, prior, sample.observation), pop);
    const double loss_xonly =
        squared_error(bayes_xonly(design, prior, sample.observation.first_stage()), pop);
    const double gap = loss_full - loss_xonly;
    const double count = static_cast<double>(r + 1);
    mean_full += (loss_full - mean_full) / count;
    mean_xonly += (loss_xonly - mean_xonly) / count;
    const double delta = gap - mean_gap;
    mean_gap += delta / count;
    m2_gap += delta * (gap - mean_gap);
  }

  RiskReport report;
  report.risk_full = mean_full;
  report.risk_xonly = mean_xonly;
  report.delta = report.risk_full - report.risk_xonly;
  report.delta_bound = delta_bound(design);
  report.method = RiskMethod::monte_carlo;
  report.mc_std_error = std::sqrt(m2_gap / static_cast<double>(replicates - 1) /
                                  static_cast<double>(replicates));
  report.replicates = replicates;
  return report;
}

RiskReport semi_analytic_risk_report(const Design& design, const PopulationMatrix& pop) {
  const PriorWeights prior = PriorWeights::symmetric(design.subgroups, design.categories);

  RiskReport report;
  report.risk_full = semi_analytic_risk_full(design, pop);

  // First-stage-only rule needs no second-stage enumeration at all.
  const FirstStagePmf pmf_x(design, pop);
  const double residual = static_cast<double>(design.population - design.first_sample);
  std::vector<long long> x_bounds(pop.counts().flat().begin(), pop.counts().flat().end());
  BoundedCompositions x_comps(std::move(x_bounds), design.first_sample);
  KahanSum risk_xonly;
  std::vector<long long> x;
  const int n = design.categories;
  for (bool ok = x_comps.first(x); ok; ok = x_comps.next(x)) {
    double loss = 0.0;
    for (int i = 0; i < design.subgroups; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t k = static_cast<std::size_t>(i * n + j);
        const double est = static_cast<double>(x[k]) + prior.probs()(i, j) * residual;
        const double d = est - static_cast<double>(pop.counts()(i, j));
        loss += d * d;
      }
    }
    risk_xonly.add(pmf_x(x) * loss);
  }
  report.risk_xonly = risk_xonly.value();
  report.delta = report.risk_full - report.risk_xonly;
  report.delta_bound = delta_bound(design);
  report.method = RiskMethod::semi_analytic;
  return report;
}

}  // namespace mvhyper
