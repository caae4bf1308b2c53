#include "mvhyper/sampling.hpp"

#include <algorithm>
#include <stdexcept>

#include "mvhyper/combinatorics.hpp"

namespace mvhyper {

long long hypergeometric_draw(Rng& rng, long long total, long long marked, long long draws) {
  if (total < 0 || marked < 0 || marked > total || draws < 0 || draws > total) {
    throw std::invalid_argument("hypergeometric_draw: invalid parameters");
  }
  const long long lo = std::max<long long>(0, draws - (total - marked));
  const long long hi = std::min(marked, draws);
  if (lo == hi) return lo;

  const double u = uniform01(rng);
  const long double denom = static_cast<long double>(binomial(total, draws));
  // p(k) = C(marked, k) C(total - marked, draws - k) / C(total, draws),
  // walked with the ratio recurrence from the lower end of the support.
  long double p = static_cast<long double>(binomial(marked, lo)) *
                  static_cast<long double>(binomial(total - marked, draws - lo)) / denom;
  long double cum = p;
  long long k = lo;
  while (k < hi && static_cast<long double>(u) >= cum) {
    // p(k+1)/p(k) = (marked - k)(draws - k) / ((k + 1)(total - marked - draws + k + 1))
    p *= static_cast<long double>(marked - k) * static_cast<long double>(draws - k);
    p /= static_cast<long double>(k + 1) *
         static_cast<long double>(total - marked - draws + k + 1);
    cum += p;
    ++k;
  }
  return k;
}

std::vector<long long> multinomial_draw(Rng& rng, long long trials,
                                        std::span<const double> probs) {
  if (trials < 0) throw std::invalid_argument("multinomial_draw: negative trials");
  if (probs.empty()) throw std::invalid_argument("multinomial_draw: no cells");
  double mass = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("multinomial_draw: negative probability");
    mass += p;
  }
  if (!(mass > 0.0)) throw std::invalid_argument("multinomial_draw: zero total mass");

  std::vector<long long> out(probs.size(), 0);
  long long remaining = trials;
  for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
    // Conditional law of cell i given the remaining trials and mass.
    if (!(mass > 0.0) || probs[i] >= mass) {
      out[i] = remaining;
      remaining = 0;
      break;
    }
    std::binomial_distribution<long long> bin(remaining, probs[i] / mass);
    out[i] = bin(rng);
    remaining -= out[i];
    mass -= probs[i];
  }
  if (remaining > 0) out.back() += remaining;
  return out;
}

}  // namespace mvhyper
