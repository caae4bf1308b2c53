#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mvhyper {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Number of marked individuals in `draws` draws without replacement from a
/// population of `total` individuals of which `marked` are marked.
/// Exact inverse-CDF sampling over the (small) support.
long long hypergeometric_draw(Rng& rng, long long total, long long marked, long long draws);

/// Multinomial draw by sequential binomial splitting. `probs` must be
/// nonnegative with positive sum.
std::vector<long long> multinomial_draw(Rng& rng, long long trials,
                                        std::span<const double> probs);

}  // namespace mvhyper
