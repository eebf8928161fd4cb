#pragma once

// Circular autocorrelation of +/-1-mapped bit sequences and patterns.
//
// With a_i = 2 b_i - 1, a_i a_j = 1 - 2 (b_i xor b_j), so every sum is
// (count - 2 * mismatches) and reduces to popcounts over packed words. Sums
// are exact integers; C(0) is exactly 1.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "georand/bitgen.hpp"
#include "georand/error.hpp"
#include "georand/patterns.hpp"

namespace georand::stats {

struct CorrelationCurve {
  /// C(j) for j = 0..k.
  std::vector<double> values;
  std::size_t k = 0;

  /// max |C(j)| over 0 < j < k (0 for k == 1).
  double max_off_origin() const {
    double m = 0.0;
    for (std::size_t j = 1; j < k; ++j) m = std::max(m, std::abs(values[j]));
    return m;
  }
};

struct Correlation2D {
  std::size_t rows = 0;  // k1
  std::size_t cols = 0;  // k2
  /// C(i, j) row-major, i = row shift in [0, rows), j = column shift in [0, cols).
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  double max_off_origin() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i != 0) m = std::max(m, std::abs(values[i]));
    }
    return m;
  }
};

namespace detail {

// Packed circular bit row supporting rotated word extraction.
class PackedRow {
 public:
  explicit PackedRow(std::span<const std::uint8_t> bits) : size_(bits.size()) {
    words_.assign((size_ + 63) / 64, 0);
    for (std::size_t i = 0; i < size_; ++i) {
      if (bits[i]) words_[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  std::size_t size() const { return size_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool bit(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

  /// Row rotated left by `shift`: result bit i = bit (i + shift) mod size.
  std::vector<std::uint64_t> rotated(std::size_t shift) const {
    std::vector<std::uint64_t> out(words_.size(), 0);
    if (size_ == 0) return out;
    shift %= size_;
    for (std::size_t w = 0; w < out.size(); ++w) {
      std::uint64_t word = 0;
      const std::size_t base = 64 * w;
      const std::size_t count = std::min<std::size_t>(64, size_ - base);
      std::size_t i = 0;
      std::size_t src = (base + shift) % size_;
      while (i < count) {
        // Copy a contiguous run [src, src + run) of the source.
        const std::size_t run = std::min({count - i, size_ - src, 64 - src % 64});
        const std::uint64_t chunk = words_[src / 64] >> (src % 64);
        const std::uint64_t mask =
            run == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << run) - 1);
        word |= (chunk & mask) << i;
        i += run;
        src += run;
        if (src == size_) src = 0;
      }
      out[w] = word;
    }
    return out;
  }

 private:
  std::size_t size_;
  std::vector<std::uint64_t> words_;
};

inline std::uint64_t mismatches(const std::vector<std::uint64_t>& a,
                                const std::vector<std::uint64_t>& b) {
  std::uint64_t count = 0;
  for (std::size_t w = 0; w < a.size(); ++w) count += std::popcount(a[w] ^ b[w]);
  return count;
}

}  // namespace detail

/// C(j) = (1/k) sum_i a_i a_{(i + j) mod k} for j = 0..k, with 0 mapped to -1.
inline CorrelationCurve autocorrelation(std::span<const std::uint8_t> bits) {
  if (bits.empty()) {
    throw Error(ErrorCode::invalid_argument, "autocorrelation: empty sequence");
  }
  const std::size_t k = bits.size();
  const detail::PackedRow row(bits);
  CorrelationCurve curve;
  curve.k = k;
  curve.values.resize(k + 1);
  const auto total = static_cast<std::int64_t>(k);
  for (std::size_t j = 0; j <= k; ++j) {
    const auto miss = static_cast<std::int64_t>(
        detail::mismatches(row.words(), row.rotated(j % k)));
    curve.values[j] =
        static_cast<double>(total - 2 * miss) / static_cast<double>(total);
  }
  return curve;
}

inline CorrelationCurve autocorrelation(const BitSequence& seq) {
  return autocorrelation(std::span<const std::uint8_t>(seq.bits()));
}

/// C(i, j) = (1/(k1 k2)) sum_m sum_n a(m, n) a(m + i, n + j), both indices
/// circular (k1 rows, k2 columns).
inline Correlation2D autocorrelation_2d(const Pattern2D& pattern) {
  const std::size_t rows = pattern.height();
  const std::size_t cols = pattern.width();
  std::vector<detail::PackedRow> packed;
  packed.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    packed.emplace_back(std::span<const std::uint8_t>(
        pattern.bits().data() + r * cols, cols));
  }
  Correlation2D out;
  out.rows = rows;
  out.cols = cols;
  out.values.resize(rows * cols);
  const auto total = static_cast<std::int64_t>(rows * cols);
  std::vector<std::vector<std::uint64_t>> shifted(rows);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t r = 0; r < rows; ++r) shifted[r] = packed[r].rotated(j);
    for (std::size_t i = 0; i < rows; ++i) {
      std::int64_t miss = 0;
      for (std::size_t m = 0; m < rows; ++m) {
        miss += static_cast<std::int64_t>(
            detail::mismatches(packed[m].words(), shifted[(m + i) % rows]));
      }
      out.values[i * cols + j] =
          static_cast<double>(total - 2 * miss) / static_cast<double>(total);
    }
  }
  return out;
}

}  // namespace georand::stats
