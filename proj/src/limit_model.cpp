#include "contagion/limit_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "contagion/error.hpp"

namespace contagion {

namespace {

[[noreturn]] void reject(const std::string& message) { throw Error("invalid_model", message); }

}  // namespace

LimitModel::LimitModel(std::vector<ClassDistribution> classes) : classes_(std::move(classes)) {
  std::sort(classes_.begin(), classes_.end(), [](const auto& a, const auto& b) {
    return std::pair{a.out_degree, a.in_degree} < std::pair{b.out_degree, b.in_degree};
  });
  double total = 0.0;
  double mean_out = 0.0;
  double mean_in = 0.0;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    auto& cls = classes_[c];
    if (c > 0 && classes_[c - 1].out_degree == cls.out_degree && classes_[c - 1].in_degree == cls.in_degree) {
      reject("duplicate degree class (" + std::to_string(cls.out_degree) + "," +
             std::to_string(cls.in_degree) + ")");
    }
    if (!(cls.mass >= 0.0) || !std::isfinite(cls.mass)) reject("class masses must be finite and >= 0");
    if (cls.threshold.size() > cls.out_degree + 1u) reject("threshold entries beyond theta = j");
    cls.threshold.resize(cls.out_degree + 1u, 0.0);
    double sum_p = 0.0;
    for (double v : cls.threshold) {
      if (!(v >= 0.0 && v <= 1.0)) reject("threshold probabilities must lie in [0,1]");
      sum_p += v;
    }
    if (sum_p > 1.0 + 1e-12) reject("threshold probabilities of a class sum above 1");
    total += cls.mass;
    mean_out += cls.out_degree * cls.mass;
    mean_in += cls.in_degree * cls.mass;
  }
  if (std::abs(total - 1.0) > 1e-9) reject("degree masses sum to " + std::to_string(total));
  if (std::abs(mean_out - mean_in) > 1e-12 * std::max(1.0, mean_out)) {
    reject("mean out-degree and mean in-degree differ");
  }
  if (!(mean_out > 0.0)) throw Error("zero_mean_degree", "mean degree must be positive");
  lambda_ = mean_out;
}

LimitModel LimitModel::from_measures(const EmpiricalMeasures& measures) {
  return LimitModel(measures.classes);
}

double LimitModel::mu(std::uint32_t j, std::uint32_t k) const noexcept {
  for (const auto& c : classes_) {
    if (c.out_degree == j && c.in_degree == k) return c.mass;
  }
  return 0.0;
}

double LimitModel::p(std::uint32_t j, std::uint32_t k, std::uint32_t theta) const noexcept {
  for (const auto& c : classes_) {
    if (c.out_degree == j && c.in_degree == k) return c.p(theta);
  }
  return 0.0;
}

}  // namespace contagion
