#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mvhyper {

/// C(n, k) as an exact 64-bit integer. Throws std::overflow_error once the
/// result (or an intermediate product) exceeds 64 bits; with the usual
/// population sizes here (K <= 60) everything fits comfortably.
unsigned long long binomial(long long n, long long k);

/// log(n!) from a cached table. n < 0 throws.
double log_factorial(long long n);

/// Pascal triangle of exact 64-bit binomials for 0 <= n <= max_n.
/// max_n is capped at 67; C(68, 34) no longer fits in 64 bits.
class BinomialTable {
public:
  explicit BinomialTable(long long max_n);

  unsigned long long at(long long n, long long k) const {
    if (k < 0 || k > n) return 0;
    if (n >= static_cast<long long>(rows_.size())) return binomial(n, k);
    return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  }

  long long max_n() const { return static_cast<long long>(rows_.size()) - 1; }

private:
  std::vector<std::vector<unsigned long long>> rows_;
};

/// log of the multinomial pmf with `trials` trials, cell counts `counts` and
/// cell probabilities `probs` (probs must be strictly positive and sum to 1).
/// Returns -inf when counts are infeasible (negative or wrong total).
double log_multinomial_pmf(long long trials, std::span<const long long> counts,
                           std::span<const double> probs);

/// Enumerates every nonnegative integer vector c with c[i] <= bounds[i] and
/// sum(c) == target, in ascending lexicographic order (index 0 most
/// significant). Usage:
///
///   std::vector<long long> c;
///   for (bool ok = comps.first(c); ok; ok = comps.next(c)) { ... }
class BoundedCompositions {
public:
  BoundedCompositions(std::vector<long long> bounds, long long target);

  /// Writes the lexicographically smallest composition; false if none exists.
  bool first(std::vector<long long>& out) const;

  /// Advances to the lexicographic successor; false when exhausted.
  bool next(std::vector<long long>& inout) const;

  /// Number of compositions, computed by dynamic programming (no enumeration).
  /// Throws std::overflow_error if the count exceeds 64 bits.
  unsigned long long count() const;

  const std::vector<long long>& bounds() const { return bounds_; }
  long long target() const { return target_; }

private:
  // Fills positions [from, end) with the lexicographically smallest suffix
  // summing to `remaining`; false if infeasible.
  bool fill_min(std::vector<long long>& out, std::size_t from, long long remaining) const;

  std::vector<long long> bounds_;
  std::vector<long long> suffix_bound_;  // suffix_bound_[i] = sum of bounds_[i..]
  long long target_;
};

template <typename Fn>
void for_each_bounded_composition(const BoundedCompositions& comps, Fn&& fn) {
  std::vector<long long> c;
  for (bool ok = comps.first(c); ok; ok = comps.next(c)) {
    fn(const_cast<const std::vector<long long>&>(c));
  }
}

}  // namespace mvhyper
