#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace contagion {

struct Summary {
  double mean = 0.0;
  /// Standard error of the mean (0 for fewer than two values).
  double std_error = 0.0;
  std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

double median(std::vector<double> values);

/// Hill estimate of the tail exponent from the largest `top_fraction` of a
/// positive sample: k / sum_{i<k} log(x_(i) / x_(k)).
/// Throws `Error("invalid_argument")` when fewer than 2 order statistics are used.
double hill_estimator(std::span<const double> sample, double top_fraction = 0.05);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// `count` points geometrically spaced from lo to hi (inclusive).
std::vector<double> log_grid(double lo, double hi, std::size_t count);

}  // namespace contagion
