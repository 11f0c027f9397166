#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace fbmlab {

/// Monte Carlo mean with its standard error and the stream ids it consumed.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_first = 0;  ///< inclusive
  std::uint64_t stream_last = 0;   ///< exclusive
};

/// Sample mean and sample-std / sqrt(N) of per-replica values.
McEstimate mc_mean(std::span<const double> values, std::uint64_t seed, std::uint64_t stream_first);

double normal_cdf(double x);
/// 1 - Phi(x) without cancellation.
double normal_sf(double x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = a + b x. slope_stderr is 0 when only two points are given.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;  ///< asymptotic critical value at the requested level
  bool pass = false;
};

/// Two-sample Kolmogorov-Smirnov test at level 1% (coefficient 1.628).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Clopper-Pearson two-sided interval with coverage 1 - alpha for k successes in n trials;
/// each side is a one-sided bound at level alpha / 2.
Interval clopper_pearson(std::size_t k, std::size_t n, double alpha);

/// One-sided Clopper-Pearson bounds at level alpha.
double binomial_lower_bound(std::size_t k, std::size_t n, double alpha);
double binomial_upper_bound(std::size_t k, std::size_t n, double alpha);

}  // namespace fbmlab
