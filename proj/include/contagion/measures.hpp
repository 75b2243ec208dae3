#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "contagion/network.hpp"

namespace contagion {

/// Mass of one degree class (j, k) together with its threshold law:
/// `threshold[theta]` for theta = 0..j. The never-default sentinel j + 1 is not
/// stored, so the entries may sum to less than one.
struct ClassDistribution {
  std::uint32_t out_degree = 0;
  std::uint32_t in_degree = 0;
  double mass = 0.0;
  std::vector<double> threshold;

  double p(std::uint32_t theta) const noexcept {
    return theta < threshold.size() ? threshold[theta] : 0.0;
  }
};

struct EmpiricalMeasures {
  std::size_t n = 0;
  std::size_t m = 0;
  double lambda = 0.0;
  /// sum_i (d+(i)^2 + d-(i)^2) / n
  double second_moment = 0.0;
  /// Sorted by (out_degree, in_degree).
  std::vector<ClassDistribution> classes;

  double mu(std::uint32_t j, std::uint32_t k) const noexcept;
  double p(std::uint32_t j, std::uint32_t k, std::uint32_t theta) const noexcept;
};

struct MeasureOptions {
  /// Monte Carlo permutations per node for degrees above `exact_max_degree`.
  std::size_t perm_budget = 200;
  std::uint64_t seed = 0;
  std::uint32_t exact_max_degree = 8;
};

/// Probability that node i has threshold theta under a uniform exposure order,
/// for theta = 0..d+(i)+1. Exact for d+(i) <= exact_max_degree; above that,
/// stratified on the first exposure (so theta = 1 stays exact) with
/// ceil(perm_budget / d) random completions per stratum drawn from
/// Stream(seed, kMeasure, i).
std::vector<double> threshold_distribution(const FinancialNetwork& network, NodeId node,
                                           const MeasureOptions& options = {});

/// mu_n, lambda_n and p_n of a network. Parallel over nodes; bit-identical to
/// the serial reference for every thread count.
EmpiricalMeasures empirical_measures(const FinancialNetwork& network, const MeasureOptions& options = {});
EmpiricalMeasures empirical_measures_serial(const FinancialNetwork& network,
                                            const MeasureOptions& options = {});

/// Class masses only (no thresholds); cheap.
EmpiricalMeasures degree_measures(const DegreeSequence& degrees);

/// The first-order quantities need only p(j,k,1), which is exact and cheap:
/// a node of positive capital ratio has threshold 1 exactly when the first
/// exposure in its order is contagious, so p_i(1) = c+(i) / d+(i).
struct FirstOrderMeasures {
  double lambda = 0.0;
  /// sum (j k / lambda) mu p(j,k,1)
  double susceptibility = 0.0;
  /// sum j mu p(j,k,1)
  double spread = 0.0;

  double resilience() const noexcept { return 1.0 - susceptibility; }
  /// 1 + spread / (1 - susceptibility); +inf when not resilient.
  double amplification_ratio() const noexcept;
};

FirstOrderMeasures first_order_measures(const FinancialNetwork& network);

struct AssumptionReport {
  std::vector<std::size_t> sizes;
  std::vector<double> lambdas;
  std::vector<double> second_moments;
  /// sup_{j,k} |mu_{n_a}(j,k) - mu_{n_b}(j,k)| for consecutive entries.
  std::vector<double> mu_drift;
  std::vector<double> lambda_drift;
  bool mu_stabilizing = true;
  bool second_moment_bounded = true;
  bool lambda_converging = true;
  std::vector<std::string> notes;
};

/// Heuristic check of the degree-regularity conditions along a size sequence.
/// Advisory only; never throws for well-formed input with >= 2 entries.
AssumptionReport validate_asymptotic_assumptions(std::span<const EmpiricalMeasures> sequence);

}  // namespace contagion
