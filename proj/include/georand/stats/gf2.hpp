#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>

namespace georand::stats {

/// 32x32 matrix over GF(2); row r is word r, column c is bit c.
using BitMatrix32 = std::array<std::uint32_t, 32>;

/// Rank over GF(2) by Gaussian elimination on packed rows.
inline int rank_gf2(BitMatrix32 rows) {
  int rank = 0;
  for (int col = 31; col >= 0 && rank < 32; --col) {
    const std::uint32_t bit = std::uint32_t{1} << col;
    int pivot = -1;
    for (int r = rank; r < 32; ++r) {
      if (rows[r] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = rank + 1; r < 32; ++r) {
      if (rows[r] & bit) rows[r] ^= rows[rank];
    }
    ++rank;
  }
  return rank;
}

/// P(rank = r) for a uniformly random n x n matrix over GF(2):
/// 2^{r(2n - r) - n^2} prod_{i<r} (1 - 2^{i-n})^2 / (1 - 2^{i-r}).
inline double gf2_rank_probability(int n, int r) {
  double log2p = static_cast<double>(r * (2 * n - r) - n * n);
  double product = 1.0;
  for (int i = 0; i < r; ++i) {
    const double a = 1.0 - std::ldexp(1.0, i - n);
    product *= a * a / (1.0 - std::ldexp(1.0, i - r));
  }
  return std::ldexp(product, static_cast<int>(log2p));
}

/// Cell probabilities for the 32x32 rank test: {<=29, 30, 31, 32}.
inline std::array<double, 4> binary_rank_cell_probabilities() {
  const double p32 = gf2_rank_probability(32, 32);
  const double p31 = gf2_rank_probability(32, 31);
  const double p30 = gf2_rank_probability(32, 30);
  return {1.0 - p32 - p31 - p30, p30, p31, p32};
}

}  // namespace georand::stats
