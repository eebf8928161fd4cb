#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "georand/error.hpp"

namespace georand::stats {

/// Upper-tail probability of the chi-square distribution with `df` degrees of
/// freedom: Q(df/2, x/2).
inline double chi_square_pvalue(double statistic, double df) {
  if (!(df > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "chi_square_pvalue: df must be > 0");
  }
  if (std::isnan(statistic)) {
    throw Error(ErrorCode::invalid_argument, "chi_square_pvalue: NaN statistic");
  }
  if (statistic <= 0.0) return 1.0;
  if (std::isinf(statistic)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

/// Upper tail of the standard normal distribution.
inline double normal_upper(double z) {
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

/// Kolmogorov limiting distribution, Q(lambda) = P(sqrt(n) D_n > lambda).
inline double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Theta-function form, fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double y = std::exp(-pi2 / (8.0 * lambda * lambda));
    double sum = 0.0;
    for (int j = 1; j <= 63; j += 2) {
      const double term = std::pow(y, static_cast<double>(j * j));
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Two-sided KS distance of the samples from Uniform(0, 1).
inline double ks_statistic(std::span<const double> samples) {
  if (samples.empty()) {
    throw Error(ErrorCode::invalid_argument, "ks_statistic: no samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double s : sorted) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw Error(ErrorCode::invalid_argument,
                  "ks_statistic: sample outside [0, 1]");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto di = static_cast<double>(i);
    d = std::max({d, (di + 1.0) / n - sorted[i], sorted[i] - di / n});
  }
  return d;
}

/// KS p-value against Uniform(0, 1) with the small-sample correction
/// lambda = D (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
inline double ks_pvalue(std::span<const double> samples) {
  const double d = ks_statistic(samples);
  const double rn = std::sqrt(static_cast<double>(samples.size()));
  return kolmogorov_q(d * (rn + 0.12 + 0.11 / rn));
}

}  // namespace georand::stats
