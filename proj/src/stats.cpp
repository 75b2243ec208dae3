#include "contagion/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "contagion/error.hpp"

namespace contagion {

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    s.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return s;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error("invalid_argument", "median of an empty sample");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

double hill_estimator(std::span<const double> sample, double top_fraction) {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw Error("invalid_argument", "top fraction must lie in (0,1]");
  }
  std::vector<double> x(sample.begin(), sample.end());
  const auto k = static_cast<std::size_t>(std::floor(top_fraction * static_cast<double>(x.size())));
  if (k < 2 || k >= x.size()) throw Error("invalid_argument", "sample too small for the Hill estimator");
  std::partial_sort(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k + 1), x.end(), std::greater<>());
  if (!(x[k] > 0.0)) throw Error("invalid_argument", "Hill estimator needs positive order statistics");
  const double ref = std::log(x[k]);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(x[i]) - ref;
  if (!(sum > 0.0)) throw Error("invalid_argument", "degenerate tail sample");
  return static_cast<double>(k) / sum;
}

namespace {

/// Kolmogorov survival function Q(t) = 2 sum_{r>=1} (-1)^(r-1) exp(-2 r^2 t^2).
double kolmogorov_q(double t) {
  if (t < 1e-3) return 1.0;
  double sum = 0.0, sign = 1.0, prev = 0.0;
  for (int r = 1; r <= 200; ++r) {
    const double term = sign * std::exp(-2.0 * r * r * t * t);
    sum += term;
    if (std::abs(term) <= 1e-12 * std::abs(sum) || std::abs(term) <= 1e-300) break;
    if (std::abs(term) == prev) break;
    prev = std::abs(term);
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error("invalid_argument", "KS test needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw Error("invalid_argument", "log grid needs 0 < lo < hi, count >= 2");
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace contagion
