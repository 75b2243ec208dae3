#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "contagion/limit_model.hpp"

namespace contagion {

/// P(Bin(j, pi) >= theta). Throws `Error("invalid_argument")` for pi outside [0,1].
double binomial_tail(std::uint32_t j, double pi, std::uint32_t theta);

/// C(j,l) (1-x)^(j-l) x^l: probability that exactly l of j out-stubs are hit
/// when each is hit with probability x.
double binomial_occupation(std::uint32_t j, std::uint32_t l, double x);

/// I(pi): expected fraction of defaulted in-stub owners after one round when
/// every counterparty defaults independently with probability pi.
double cascade_response(const LimitModel& model, double pi);

/// g(pi) = sum_{j,k} mu sum_theta p beta(j, pi, theta).
double default_fraction_at(const LimitModel& model, double pi);

/// sum_{j,k} (j k / lambda) mu(j,k) p(j,k,1).
double susceptibility(const LimitModel& model);

struct FixedPointOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 1'000'000;
  double derivative_step = 1e-6;
  double critical_band = 1e-3;
};

struct FixedPointResult {
  double pi_star = 0.0;
  /// Centered finite-difference estimate of I'(pi_star).
  double derivative = 0.0;
  bool stable = false;
  /// |I'(pi*) - 1| below the critical band.
  bool near_critical = false;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  bool used_bisection = false;
};

/// Least fixed point of I on [0,1] by monotone iteration from 0, with a
/// bracketing bisection fallback when the iteration cap or the residual check
/// fails. Non-convergence is reported through `converged`, not thrown.
FixedPointResult smallest_fixed_point(const LimitModel& model, const FixedPointOptions& options = {});

enum class ContagionRegime { kTotal, kStable, kCritical };

std::string to_string(ContagionRegime regime);

struct AsymptoticFraction {
  double fraction = 0.0;
  ContagionRegime regime = ContagionRegime::kStable;
  FixedPointResult fixed_point;
};

/// 1 when pi* = 1; otherwise g(pi*), flagged kCritical when I'(pi*) >= 1.
AsymptoticFraction asymptotic_fraction(const LimitModel& model, const FixedPointOptions& options = {});

/// 1 - susceptibility(model).
double resilience(const LimitModel& model);

struct Amplification {
  double fraction = 0.0;
  double ratio = 0.0;
};

/// First-order final default fraction eps (1 + sum j mu p1 / (1 - S)) for a
/// uniform seed fraction eps. Throws `Error("supercritical")` when S >= 1.
Amplification amplification(const LimitModel& model, double epsilon);

/// First-order final fraction when a fraction eps of class (d_plus, d_minus)
/// defaults: eps mu(d+,d-) (1 + (d-/lambda) S / (1 - S)).
/// Throws `Error("supercritical")` or `Error("unknown_class")`.
double targeted_amplification(const LimitModel& model, std::uint32_t d_plus, std::uint32_t d_minus,
                              double epsilon);

/// Extinction probability of the contagious-link branching process: least
/// solution of y = sum (mu j / lambda) (1 - p1 + p1 y^k). Equals 1 exactly
/// when S <= 1.
double branching_extinction(const LimitModel& model);

/// s^{j,k,theta,l}(tau) = mu p C(j,l) (1 - tau/lambda)^(j-l) (tau/lambda)^l
/// for 0 <= l < theta <= j and 0 <= tau < lambda.
double ode_solution(const LimitModel& model, std::uint32_t j, std::uint32_t k, std::uint32_t theta,
                    std::uint32_t l, double tau);

struct DeltaEntry {
  std::uint32_t j;
  std::uint32_t k;
  std::uint32_t theta;
  double value;
};

struct DeltaValues {
  /// delta^{j,k,theta}(tau) for every class and theta <= j.
  std::vector<DeltaEntry> per_class;
  /// lambda (I(tau/lambda) - tau/lambda): black in-stubs of defaulted nodes per node.
  double delta_minus = 0.0;
  /// Defaulted nodes per node.
  double delta = 0.0;
};

DeltaValues delta_functions(const LimitModel& model, double tau);

}  // namespace contagion
