#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "contagion/measures.hpp"

namespace contagion {

/// Limit degree law mu(j,k) with threshold law p(j,k,theta) on a finite
/// support. Validated on construction:
///   - masses non-negative and summing to 1 (1e-9),
///   - 0 < lambda, with sum j mu and sum k mu equal to 1e-12,
///   - every p in [0,1] and sum_theta p(j,k,theta) <= 1 (1e-12),
///   - no duplicate classes; p vectors longer than j + 1 are rejected.
class LimitModel {
 public:
  explicit LimitModel(std::vector<ClassDistribution> classes);

  /// Limit model whose mu and p are the empirical ones.
  static LimitModel from_measures(const EmpiricalMeasures& measures);

  std::span<const ClassDistribution> classes() const noexcept { return classes_; }
  double lambda() const noexcept { return lambda_; }
  double mu(std::uint32_t j, std::uint32_t k) const noexcept;
  double p(std::uint32_t j, std::uint32_t k, std::uint32_t theta) const noexcept;

 private:
  std::vector<ClassDistribution> classes_;
  double lambda_ = 0.0;
};

}  // namespace contagion
