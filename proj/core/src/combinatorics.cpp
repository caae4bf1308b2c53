#include "mvhyper/combinatorics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvhyper {

unsigned long long binomial(long long n, long long k) {
  if (n < 0) throw std::invalid_argument("binomial: n < 0");
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 result = 1;
  for (long long i = 1; i <= k; ++i) {
    result *= static_cast<unsigned __int128>(n - k + i);
    result /= static_cast<unsigned __int128>(i);
    if (result > std::numeric_limits<unsigned long long>::max()) {
      throw std::overflow_error("binomial: result exceeds 64 bits");
    }
  }
  return static_cast<unsigned long long>(result);
}

BinomialTable::BinomialTable(long long max_n) {
  if (max_n < 0) throw std::invalid_argument("BinomialTable: max_n < 0");
  if (max_n > 67) throw std::invalid_argument("BinomialTable: max_n > 67 overflows 64 bits");
  rows_.resize(static_cast<std::size_t>(max_n) + 1);
  for (long long n = 0; n <= max_n; ++n) {
    auto& row = rows_[static_cast<std::size_t>(n)];
    row.assign(static_cast<std::size_t>(n) + 1, 1);
    for (long long k = 1; k < n; ++k) {
      row[static_cast<std::size_t>(k)] =
          rows_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] +
          rows_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
    }
  }
}

namespace {

std::vector<double> build_log_factorial_table(std::size_t size) {
  std::vector<double> table(size);
  long double acc = 0.0L;
  table[0] = 0.0;
  for (std::size_t i = 1; i < size; ++i) {
    acc += std::log(static_cast<long double>(i));
    table[i] = static_cast<double>(acc);
  }
  return table;
}

}  // namespace

double log_factorial(long long n) {
  if (n < 0) throw std::invalid_argument("log_factorial: n < 0");
  static const std::vector<double> table = build_log_factorial_table(4096);
  if (n < static_cast<long long>(table.size())) {
    return table[static_cast<std::size_t>(n)];
  }
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_multinomial_pmf(long long trials, std::span<const long long> counts,
                           std::span<const double> probs) {
  if (counts.size() != probs.size()) {
    throw std::invalid_argument("log_multinomial_pmf: size mismatch");
  }
  long long total = 0;
  for (long long c : counts) {
    if (c < 0) return -std::numeric_limits<double>::infinity();
    total += c;
  }
  if (total != trials || trials < 0) {
    return -std::numeric_limits<double>::infinity();
  }
  double log_p = log_factorial(trials);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    log_p -= log_factorial(counts[i]);
    if (counts[i] > 0) {
      log_p += static_cast<double>(counts[i]) * std::log(probs[i]);
    }
  }
  return log_p;
}

BoundedCompositions::BoundedCompositions(std::vector<long long> bounds, long long target)
    : bounds_(std::move(bounds)), target_(target) {
  if (bounds_.empty()) throw std::invalid_argument("BoundedCompositions: no cells");
  for (long long b : bounds_) {
    if (b < 0) throw std::invalid_argument("BoundedCompositions: negative bound");
  }
  suffix_bound_.assign(bounds_.size() + 1, 0);
  for (std::size_t i = bounds_.size(); i-- > 0;) {
    suffix_bound_[i] = suffix_bound_[i + 1] + bounds_[i];
  }
}

bool BoundedCompositions::fill_min(std::vector<long long>& out, std::size_t from,
                                   long long remaining) const {
  if (remaining < 0 || remaining > suffix_bound_[from]) return false;
  for (std::size_t i = from; i < bounds_.size(); ++i) {
    const long long lo = remaining - suffix_bound_[i + 1];
    out[i] = lo > 0 ? lo : 0;
    remaining -= out[i];
  }
  return remaining == 0;
}

bool BoundedCompositions::first(std::vector<long long>& out) const {
  out.assign(bounds_.size(), 0);
  return fill_min(out, 0, target_);
}

bool BoundedCompositions::next(std::vector<long long>& inout) const {
  const std::size_t t = bounds_.size();
  long long right_mass = 0;
  // Find the rightmost position that can absorb one unit from its suffix.
  for (std::size_t j = t; j-- > 1;) {
    right_mass += inout[j];
    const std::size_t i = j - 1;
    if (right_mass >= 1 && inout[i] < bounds_[i]) {
      ++inout[i];
      return fill_min(inout, j, right_mass - 1);
    }
  }
  return false;
}

unsigned long long BoundedCompositions::count() const {
  if (target_ < 0) return 0;
  // ways[s] = number of prefixes summing to s.
  std::vector<unsigned long long> ways(static_cast<std::size_t>(target_) + 1, 0);
  ways[0] = 1;
  const unsigned long long kMax = std::numeric_limits<unsigned long long>::max();
  for (long long b : bounds_) {
    std::vector<unsigned long long> nxt(ways.size(), 0);
    // Sliding-window sum over the previous row, window width b + 1.
    unsigned long long window = 0;
    for (long long s = 0; s <= target_; ++s) {
      if (kMax - window < ways[static_cast<std::size_t>(s)]) {
        throw std::overflow_error("BoundedCompositions::count: exceeds 64 bits");
      }
      window += ways[static_cast<std::size_t>(s)];
      if (s - b - 1 >= 0) window -= ways[static_cast<std::size_t>(s - b - 1)];
      nxt[static_cast<std::size_t>(s)] = window;
    }
    ways.swap(nxt);
  }
  return ways[static_cast<std::size_t>(target_)];
}

}  // namespace mvhyper
