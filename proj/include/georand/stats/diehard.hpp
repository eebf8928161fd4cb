#pragma once

// Six tests from Marsaglia's battery: runs, squeeze, minimum distance,
// count-the-1's (byte stream), birthday spacings and 32x32 binary rank.
// Every test reads its input from the start of the supplied word stream.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>

#include "georand/error.hpp"
#include "georand/stats/distributions.hpp"
#include "georand/stats/gf2.hpp"
#include "georand/stats/stream.hpp"

namespace georand::stats {

struct NamedValue {
  std::string name;
  double value = 0.0;
};

struct TestReport {
  std::string name;
  std::vector<NamedValue> statistics;
  double p_value = 1.0;
  /// Further p-values the test reports alongside the headline one.
  std::vector<NamedValue> extra_p_values;
  std::vector<NamedValue> parameters;

  std::vector<double> all_p_values() const {
    std::vector<double> out{p_value};
    for (const auto& e : extra_p_values) out.push_back(e.value);
    return out;
  }
};

namespace detail {

inline double chi_square(std::span<const double> observed,
                         std::span<const double> expected) {
  double chi = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    chi += d * d / expected[i];
  }
  return chi;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Runs up and down

namespace detail {

// Covariance weights and run-length probabilities for run lengths 1..5, >=6.
inline constexpr std::array<std::array<double, 6>, 6> kRunsWeights = {{
    {4529.4, 9044.9, 13568.0, 18091.0, 22615.0, 27892.0},
    {9044.9, 18097.0, 27139.0, 36187.0, 45234.0, 55789.0},
    {13568.0, 27139.0, 40721.0, 54281.0, 67852.0, 83685.0},
    {18091.0, 36187.0, 54281.0, 72414.0, 90470.0, 111580.0},
    {22615.0, 45234.0, 67852.0, 90470.0, 113262.0, 139476.0},
    {27892.0, 55789.0, 83685.0, 111580.0, 139476.0, 172860.0},
}};
inline constexpr std::array<double, 6> kRunsProbabilities = {
    1.0 / 6.0, 5.0 / 24.0, 11.0 / 120.0, 19.0 / 720.0, 29.0 / 5040.0, 1.0 / 840.0};

template <typename Less>
std::array<double, 6> run_counts(std::span<const double> values, Less less) {
  std::array<double, 6> counts{};
  std::size_t run = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (less(values[i - 1], values[i])) {
      ++run;
    } else {
      counts[std::min<std::size_t>(run, 6) - 1] += 1.0;
      run = 1;
    }
  }
  counts[std::min<std::size_t>(run, 6) - 1] += 1.0;
  return counts;
}

inline double runs_statistic(const std::array<double, 6>& counts, std::size_t n) {
  const auto dn = static_cast<double>(n);
  double v = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      v += (counts[i] - dn * kRunsProbabilities[i]) *
           (counts[j] - dn * kRunsProbabilities[j]) * kRunsWeights[i][j];
    }
  }
  return v / (dn - 6.0);
}

}  // namespace detail

/// Per block, runs up and runs down are tallied by length (1..5, >=6) and
/// turned into a 6-df quadratic statistic; the report carries the KS p-value
/// over the block p-values, runs up as the headline and runs down as extra.
inline TestReport runs_test(std::span<const std::uint32_t> words,
                            std::size_t blocks = 10, std::size_t block_len = 10000) {
  if (blocks == 0 || block_len < 7) {
    throw Error(ErrorCode::invalid_argument, "runs: need blocks >= 1, block_len >= 7");
  }
  WordStream stream(words, "runs");
  stream.require(blocks * block_len);
  std::vector<double> p_up, p_down;
  std::vector<double> values(block_len);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (auto& v : values) v = stream.next_uniform();
    const auto up = detail::run_counts(values, [](double a, double c) { return a < c; });
    const auto down = detail::run_counts(values, [](double a, double c) { return a > c; });
    p_up.push_back(chi_square_pvalue(detail::runs_statistic(up, block_len), 6));
    p_down.push_back(chi_square_pvalue(detail::runs_statistic(down, block_len), 6));
  }
  TestReport r;
  r.name = "runs";
  r.statistics = {{"ks_d_up", ks_statistic(p_up)}, {"ks_d_down", ks_statistic(p_down)}};
  r.p_value = ks_pvalue(p_up);
  r.extra_p_values = {{"runs_down", ks_pvalue(p_down)}};
  r.parameters = {{"blocks", static_cast<double>(blocks)},
                  {"block_len", static_cast<double>(block_len)}};
  return r;
}

// ---------------------------------------------------------------------------
// Squeeze

inline constexpr std::size_t kSqueezeCells = 43;  // <=6, 7..47, >=48

/// Exact cell probabilities for the number of steps taken by k <- ceil(k U)
/// to reach 1 from k = big_k (2^31 in the test).
///
/// From state j the next state is uniform on {1..j}, so the step count T has
/// generating function z prod_{j=2}^{K} (j-1)/(j-z). Its logarithm is
/// sum_m (z^m - 1) S_m / m with S_m = sum_{j=2}^{K} j^-m: T - 1 is compound
/// Poisson and its mass function follows from the Panjer recursion.
inline std::array<double, kSqueezeCells> squeeze_cell_probabilities(
    std::uint64_t big_k = std::uint64_t{1} << 31) {
  if (big_k < 2) throw Error(ErrorCode::invalid_argument, "squeeze: start value must be >= 2");
  constexpr int kTerms = 200;
  std::vector<double> lambda(kTerms + 1, 0.0);
  if (big_k <= (std::uint64_t{1} << 16)) {
    // Direct sums, smallest terms first.
    for (int m = 1; m <= kTerms; ++m) {
      double s = 0.0;
      for (std::uint64_t j = big_k; j >= 2; --j) s += std::pow(static_cast<double>(j), -m);
      lambda[m] = s / m;
    }
  } else {
    const auto k = static_cast<double>(big_k);
    const double euler_gamma = 0.57721566490153286061;
    // Harmonic number H_K by its asymptotic expansion.
    const double harmonic = std::log(k) + euler_gamma + 0.5 / k - 1.0 / (12.0 * k * k);
    lambda[1] = harmonic - 1.0;
    for (int m = 2; m <= kTerms; ++m) {
      // Tail beyond K: sum_{j>K} j^-m ~ K^{1-m}/(m-1) - K^-m/2.
      const double tail = std::pow(k, 1.0 - m) / (m - 1) - 0.5 * std::pow(k, -m);
      const double zeta_minus_one =
          m < 60 ? boost::math::zeta(static_cast<double>(m)) - 1.0 : std::ldexp(1.0, -m);
      lambda[m] = (zeta_minus_one - tail) / m;
    }
  }
  double total = 0.0;
  for (int m = 1; m <= kTerms; ++m) total += lambda[m];
  std::vector<double> pmf(kTerms + 1, 0.0);  // pmf[t] = P(T - 1 = t)
  pmf[0] = std::exp(-total);
  for (int t = 1; t <= kTerms; ++t) {
    double acc = 0.0;
    for (int m = 1; m <= t; ++m) acc += m * lambda[m] * pmf[t - m];
    pmf[t] = acc / t;
  }
  std::array<double, kSqueezeCells> cells{};
  for (int t = 0; t <= kTerms; ++t) {
    const int steps = t + 1;
    const int cell = std::clamp(steps, 6, 48) - 6;
    cells[static_cast<std::size_t>(cell)] += pmf[t];
  }
  return cells;
}

inline TestReport squeeze_test(std::span<const std::uint32_t> words,
                               std::size_t trials = 100000) {
  if (trials == 0) throw Error(ErrorCode::invalid_argument, "squeeze: trials must be >= 1");
  static const auto probabilities = squeeze_cell_probabilities();
  WordStream stream(words, "squeeze");
  // About 23 draws per trial on average.
  stream.require(trials * 24);
  std::array<double, kSqueezeCells> observed{};
  for (std::size_t t = 0; t < trials; ++t) {
    double k = 2147483648.0;
    int steps = 0;
    while (k != 1.0 && steps < 48) {
      k = std::max(1.0, std::ceil(k * stream.next_uniform()));
      ++steps;
    }
    observed[static_cast<std::size_t>(std::max(steps, 6) - 6)] += 1.0;
  }
  std::array<double, kSqueezeCells> expected{};
  for (std::size_t i = 0; i < kSqueezeCells; ++i) {
    expected[i] = probabilities[i] * static_cast<double>(trials);
  }
  const double chi = detail::chi_square(observed, expected);
  const double df = kSqueezeCells - 1;
  TestReport r;
  r.name = "squeeze";
  r.statistics = {{"chi_square", chi}, {"z_score", (chi - df) / std::sqrt(2.0 * df)}};
  r.p_value = chi_square_pvalue(chi, df);
  r.parameters = {{"trials", static_cast<double>(trials)}, {"df", df}};
  return r;
}

// ---------------------------------------------------------------------------
// Minimum distance

struct PlanePoint {
  double x;
  double y;
};

/// Squared minimum pairwise distance by an x-sorted sweep.
inline double min_distance_squared(std::vector<PlanePoint> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "min_distance: need at least 2 points");
  }
  std::sort(points.begin(), points.end(),
            [](const PlanePoint& a, const PlanePoint& b) { return a.x < b.x; });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double dx = points[j].x - points[i].x;
      if (dx * dx >= best) break;
      const double dy = points[j].y - points[i].y;
      best = std::min(best, dx * dx + dy * dy);
    }
  }
  return best;
}

/// Per set, the minimum distance d among points_per_set points in a
/// side x side square gives t = 1 - exp(-d^2 / 0.995); KS over the t values.
inline TestReport minimum_distance_test(std::span<const std::uint32_t> words,
                                        std::size_t sets = 100,
                                        std::size_t points_per_set = 8000,
                                        double side = 10000.0) {
  if (sets == 0 || points_per_set < 2) {
    throw Error(ErrorCode::invalid_argument, "min_distance: need sets >= 1, points >= 2");
  }
  WordStream stream(words, "minimum-distance");
  stream.require(2 * sets * points_per_set);
  std::vector<double> transformed;
  transformed.reserve(sets);
  double mean_d2 = 0.0;
  std::vector<PlanePoint> points(points_per_set);
  for (std::size_t s = 0; s < sets; ++s) {
    for (auto& p : points) {
      p.x = side * stream.next_uniform();
      p.y = side * stream.next_uniform();
    }
    const double d2 = min_distance_squared(points);
    mean_d2 += d2;
    transformed.push_back(1.0 - std::exp(-d2 / 0.995));
  }
  TestReport r;
  r.name = "minimum-distance";
  r.statistics = {{"ks_d", ks_statistic(transformed)},
                  {"mean_d2", mean_d2 / static_cast<double>(sets)}};
  r.p_value = ks_pvalue(transformed);
  r.parameters = {{"sets", static_cast<double>(sets)},
                  {"points_per_set", static_cast<double>(points_per_set)},
                  {"side", side}};
  return r;
}

// ---------------------------------------------------------------------------
// Count the 1's in a stream of bytes

/// Letter class of a byte by its number of ones: {<=2, 3, 4, 5, >=6} -> 0..4.
inline int ones_letter(std::uint8_t byte) {
  const int ones = std::popcount(static_cast<unsigned>(byte));
  return std::clamp(ones, 2, 6) - 2;
}

inline constexpr std::array<double, 5> kLetterProbabilities = {
    37.0 / 256.0, 56.0 / 256.0, 70.0 / 256.0, 56.0 / 256.0, 37.0 / 256.0};

/// Overlapping 5-letter and 4-letter word counts over `sample` windows;
/// statistic Q5 - Q4 is chi-square with 5^5 - 5^4 = 2500 df.
inline TestReport count_the_ones_test(std::span<const std::uint32_t> words,
                                      std::size_t sample = 256000) {
  if (sample == 0) throw Error(ErrorCode::invalid_argument, "count-ones: sample must be >= 1");
  WordStream stream(words, "count-the-ones");
  stream.require((sample + 4 + 3) / 4);
  std::vector<double> count5(3125, 0.0), count4(625, 0.0);
  unsigned window = 0;
  for (int i = 0; i < 4; ++i) window = window * 5 + ones_letter(stream.next_byte());
  for (std::size_t i = 0; i < sample; ++i) {
    window = (window % 625) * 5 + static_cast<unsigned>(ones_letter(stream.next_byte()));
    count5[window] += 1.0;
    count4[window % 625] += 1.0;
  }
  auto q = [&](const std::vector<double>& counts, int letters) {
    double chi = 0.0;
    for (std::size_t w = 0; w < counts.size(); ++w) {
      double p = 1.0;
      std::size_t rest = w;
      for (int l = 0; l < letters; ++l) {
        p *= kLetterProbabilities[rest % 5];
        rest /= 5;
      }
      const double e = p * static_cast<double>(sample);
      const double d = counts[w] - e;
      chi += d * d / e;
    }
    return chi;
  };
  const double q5 = q(count5, 5);
  const double q4 = q(count4, 4);
  const double stat = q5 - q4;
  TestReport r;
  r.name = "count-the-ones";
  r.statistics = {{"q5_minus_q4", stat}, {"z_score", (stat - 2500.0) / std::sqrt(5000.0)}};
  r.p_value = chi_square_pvalue(stat, 2500.0);
  r.parameters = {{"sample", static_cast<double>(sample)}, {"df", 2500.0}};
  return r;
}

// ---------------------------------------------------------------------------
// Birthday spacings

struct PoissonCells {
  std::vector<double> probabilities;  // merged cells, sum to 1
  std::size_t low = 0;                // first cell holds counts <= low
  std::size_t high = 0;               // last cell holds counts >= high

  std::size_t cell_of(std::size_t count) const {
    if (count <= low) return 0;
    if (count >= high) return probabilities.size() - 1;
    return count - low;
  }
};

/// Poisson(lambda) cells with both tails merged until each tail cell expects
/// at least `min_expected` of `sample` observations.
inline PoissonCells poisson_cells(double lambda, double sample, double min_expected = 5.0) {
  std::vector<double> pmf;
  double p = std::exp(-lambda);
  for (std::size_t k = 0; k < 10 * static_cast<std::size_t>(lambda + 10); ++k) {
    pmf.push_back(p);
    p *= lambda / static_cast<double>(k + 1);
  }
  PoissonCells cells;
  double lower = 0.0;
  std::size_t low = 0;
  for (; low < pmf.size(); ++low) {
    lower += pmf[low];
    if (lower * sample >= min_expected) break;
  }
  std::size_t high = pmf.size();
  double above = 0.0;
  while (high > low + 1) {
    --high;
    above += pmf[high];
    if (above * sample >= min_expected) break;
  }
  double below_high = 0.0;
  for (std::size_t k = 0; k < high; ++k) below_high += pmf[k];
  const double upper_tail = 1.0 - below_high;
  cells.low = low;
  cells.high = high;
  cells.probabilities.push_back(lower);
  for (std::size_t k = low + 1; k < high; ++k) cells.probabilities.push_back(pmf[k]);
  cells.probabilities.push_back(upper_tail);
  return cells;
}

/// Number of repeated values among the spacings of the sorted birthdays.
inline std::size_t duplicate_spacings(std::vector<std::uint32_t> days) {
  std::sort(days.begin(), days.end());
  std::vector<std::uint32_t> spacings(days.size() - 1);
  for (std::size_t i = 1; i < days.size(); ++i) spacings[i - 1] = days[i] - days[i - 1];
  std::sort(spacings.begin(), spacings.end());
  std::size_t dups = 0;
  for (std::size_t i = 1; i < spacings.size(); ++i) {
    if (spacings[i] == spacings[i - 1]) ++dups;
  }
  return dups;
}

/// Per trial, `bdays` birthdays from the top `bits_per_day` bits of each word;
/// duplicate spacing counts are compared with Poisson(bdays^3 / 2^(bits + 2)).
inline TestReport birthday_spacings_test(std::span<const std::uint32_t> words,
                                         std::size_t bdays = 1024,
                                         unsigned bits_per_day = 24,
                                         std::size_t sample = 500) {
  if (bdays < 3 || bits_per_day == 0 || bits_per_day > 32 || sample == 0) {
    throw Error(ErrorCode::invalid_argument, "birthday-spacings: invalid parameters");
  }
  WordStream stream(words, "birthday-spacings");
  stream.require(sample * bdays);
  const double m = static_cast<double>(bdays);
  const double lambda = m * m * m / std::ldexp(4.0, static_cast<int>(bits_per_day));
  const auto cells = poisson_cells(lambda, static_cast<double>(sample));
  std::vector<double> observed(cells.probabilities.size(), 0.0);
  std::vector<std::uint32_t> days(bdays);
  double mean_dups = 0.0;
  for (std::size_t t = 0; t < sample; ++t) {
    for (auto& d : days) d = stream.next_word() >> (32 - bits_per_day);
    const auto dups = duplicate_spacings(days);
    mean_dups += static_cast<double>(dups);
    observed[cells.cell_of(dups)] += 1.0;
  }
  std::vector<double> expected(cells.probabilities.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    expected[i] = cells.probabilities[i] * static_cast<double>(sample);
  }
  const double chi = detail::chi_square(observed, expected);
  const double df = static_cast<double>(expected.size() - 1);
  TestReport r;
  r.name = "birthday-spacings";
  r.statistics = {{"chi_square", chi}, {"mean_duplicates", mean_dups / static_cast<double>(sample)}};
  r.p_value = chi_square_pvalue(chi, df);
  r.parameters = {{"bdays", m},
                  {"bits_per_day", static_cast<double>(bits_per_day)},
                  {"lambda", lambda},
                  {"sample", static_cast<double>(sample)},
                  {"df", df}};
  return r;
}

// ---------------------------------------------------------------------------
// Binary rank of 32x32 matrices

inline TestReport binary_rank_test(std::span<const std::uint32_t> words,
                                   std::size_t matrices = 40000) {
  if (matrices == 0) throw Error(ErrorCode::invalid_argument, "binary-rank: matrices must be >= 1");
  WordStream stream(words, "binary-rank");
  stream.require(32 * matrices);
  std::array<double, 4> observed{};
  BitMatrix32 m{};
  for (std::size_t i = 0; i < matrices; ++i) {
    for (auto& row : m) row = stream.next_word();
    const int rank = rank_gf2(m);
    observed[static_cast<std::size_t>(std::max(rank, 29) - 29)] += 1.0;
  }
  const auto probabilities = binary_rank_cell_probabilities();
  std::array<double, 4> expected{};
  for (std::size_t i = 0; i < 4; ++i) {
    expected[i] = probabilities[i] * static_cast<double>(matrices);
  }
  const double chi = detail::chi_square(observed, expected);
  TestReport r;
  r.name = "binary-rank";
  r.statistics = {{"chi_square", chi},
                  {"rank_le29", observed[0]},
                  {"rank_30", observed[1]},
                  {"rank_31", observed[2]},
                  {"rank_32", observed[3]}};
  r.p_value = chi_square_pvalue(chi, 3.0);
  r.parameters = {{"matrices", static_cast<double>(matrices)}, {"df", 3.0}};
  return r;
}

}  // namespace georand::stats
