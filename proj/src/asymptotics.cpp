#include "contagion/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "contagion/error.hpp"

namespace contagion {

namespace {

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double log_choose(std::uint32_t n, std::uint32_t r) {
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

double choose(std::uint32_t n, std::uint32_t r) {
  if (r > n) return 0.0;
  r = std::min(r, n - r);
  double c = 1.0;
  for (std::uint32_t i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

double binomial_term(std::uint32_t j, std::uint32_t l, double pi) {
  if (j <= 64) return choose(j, l) * std::pow(pi, l) * std::pow(1.0 - pi, j - l);
  return std::exp(log_choose(j, l) + l * std::log(pi) + (j - l) * std::log1p(-pi));
}

void check_probability(double pi) {
  if (!(pi >= 0.0 && pi <= 1.0)) throw Error("invalid_argument", "probability outside [0,1]");
}

double derivative_at(const LimitModel& model, double pi, double h) {
  const double lo = std::max(0.0, pi - h);
  const double hi = std::min(1.0, pi + h);
  return (cascade_response(model, hi) - cascade_response(model, lo)) / (hi - lo);
}

}  // namespace

double binomial_tail(std::uint32_t j, double pi, std::uint32_t theta) {
  check_probability(pi);
  if (theta == 0) return 1.0;
  if (theta > j) return 0.0;
  if (pi == 0.0) return 0.0;
  if (pi == 1.0) return 1.0;
  // Sum whichever tail excludes the mode, so the sum is of small terms.
  KahanSum acc;
  if (theta > j * pi) {
    for (std::uint32_t l = theta; l <= j; ++l) acc.add(binomial_term(j, l, pi));
    return std::clamp(acc.sum, 0.0, 1.0);
  }
  for (std::uint32_t l = 0; l < theta; ++l) acc.add(binomial_term(j, l, pi));
  return std::clamp(1.0 - acc.sum, 0.0, 1.0);
}

double binomial_occupation(std::uint32_t j, std::uint32_t l, double x) {
  check_probability(x);
  if (l > j) return 0.0;
  return binomial_term(j, l, x);
}

double cascade_response(const LimitModel& model, double pi) {
  check_probability(pi);
  KahanSum acc;
  for (const auto& c : model.classes()) {
    if (c.in_degree == 0 || c.mass == 0.0) continue;
    double inner = 0.0;
    for (std::uint32_t t = 0; t <= c.out_degree; ++t) {
      if (c.threshold[t] != 0.0) inner += c.threshold[t] * binomial_tail(c.out_degree, pi, t);
    }
    acc.add(c.mass * c.in_degree / model.lambda() * inner);
  }
  return std::clamp(acc.sum, 0.0, 1.0 + 1e-12);
}

double default_fraction_at(const LimitModel& model, double pi) {
  check_probability(pi);
  KahanSum acc;
  for (const auto& c : model.classes()) {
    double inner = 0.0;
    for (std::uint32_t t = 0; t <= c.out_degree; ++t) {
      if (c.threshold[t] != 0.0) inner += c.threshold[t] * binomial_tail(c.out_degree, pi, t);
    }
    acc.add(c.mass * inner);
  }
  return acc.sum;
}

double susceptibility(const LimitModel& model) {
  KahanSum acc;
  for (const auto& c : model.classes()) {
    acc.add(static_cast<double>(c.out_degree) * c.in_degree / model.lambda() * c.mass * c.p(1));
  }
  return acc.sum;
}

FixedPointResult smallest_fixed_point(const LimitModel& model, const FixedPointOptions& options) {
  FixedPointResult r;
  double pi = 0.0;
  while (r.iterations < options.max_iterations) {
    const double next = std::min(1.0, cascade_response(model, pi));
    ++r.iterations;
    const double step = std::abs(next - pi);
    pi = next;
    if (step <= options.tolerance) break;
  }
  r.residual = std::abs(cascade_response(model, pi) - pi);
  r.converged = r.residual <= options.tolerance;

  if (!r.converged) {
    // The iterate is below pi*, where I(pi) - pi >= 0. Bracket the first sign
    // change on a grid above it, then bisect.
    auto excess = [&](double x) { return cascade_response(model, x) - x; };
    double lo = pi;
    double hi = 1.0;
    for (double x = lo + 1e-3; x < 1.0; x += 1e-3) {
      if (excess(x) <= 0.0) {
        hi = x;
        break;
      }
      lo = x;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    const double r_lo = std::abs(excess(lo));
    const double r_hi = std::abs(excess(hi));
    pi = r_lo <= r_hi ? lo : hi;
    r.residual = std::min(r_lo, r_hi);
    r.converged = r.residual <= options.tolerance;
    r.used_bisection = true;
  }
  r.pi_star = pi;
  r.derivative = derivative_at(model, pi, options.derivative_step);
  r.stable = r.derivative < 1.0;
  r.near_critical = std::abs(r.derivative - 1.0) < options.critical_band;
  return r;
}

std::string to_string(ContagionRegime regime) {
  switch (regime) {
    case ContagionRegime::kTotal: return "total";
    case ContagionRegime::kStable: return "stable";
    case ContagionRegime::kCritical: return "critical";
  }
  return "unknown";
}

AsymptoticFraction asymptotic_fraction(const LimitModel& model, const FixedPointOptions& options) {
  AsymptoticFraction out;
  out.fixed_point = smallest_fixed_point(model, options);
  if (out.fixed_point.pi_star >= 1.0 - options.tolerance) {
    out.fraction = 1.0;
    out.regime = ContagionRegime::kTotal;
    return out;
  }
  out.fraction = default_fraction_at(model, out.fixed_point.pi_star);
  out.regime = out.fixed_point.stable ? ContagionRegime::kStable : ContagionRegime::kCritical;
  return out;
}

double resilience(const LimitModel& model) { return 1.0 - susceptibility(model); }

Amplification amplification(const LimitModel& model, double epsilon) {
  const double s = susceptibility(model);
  if (s >= 1.0) throw Error("supercritical", "resilience is not positive; first-order amplification is invalid");
  KahanSum first;
  for (const auto& c : model.classes()) first.add(c.out_degree * c.mass * c.p(1));
  Amplification a;
  a.ratio = 1.0 + first.sum / (1.0 - s);
  a.fraction = epsilon * a.ratio;
  return a;
}

double targeted_amplification(const LimitModel& model, std::uint32_t d_plus, std::uint32_t d_minus,
                              double epsilon) {
  const double mass = model.mu(d_plus, d_minus);
  if (!(mass > 0.0)) throw Error("unknown_class", "degree class has no mass");
  const double s = susceptibility(model);
  if (s >= 1.0) throw Error("supercritical", "resilience is not positive; first-order amplification is invalid");
  return epsilon * mass * (1.0 + d_minus / model.lambda() * s / (1.0 - s));
}

double branching_extinction(const LimitModel& model) {
  // The offspring generating function is convex with f(1) = 1 and
  // f'(1) = S, so the least root is 1 whenever S <= 1.
  if (susceptibility(model) <= 1.0) return 1.0;
  auto offspring = [&](double y) {
    KahanSum acc;
    for (const auto& c : model.classes()) {
      if (c.out_degree == 0) continue;
      const double p1 = c.p(1);
      acc.add(c.mass * c.out_degree / model.lambda() * (1.0 - p1 + p1 * std::pow(y, c.in_degree)));
    }
    return std::min(acc.sum, 1.0);
  };
  double y = 0.0;
  for (std::size_t it = 0; it < 1'000'000; ++it) {
    const double next = offspring(y);
    if (std::abs(next - y) <= 1e-15) return next;
    y = next;
  }
  return y;
}

double ode_solution(const LimitModel& model, std::uint32_t j, std::uint32_t k, std::uint32_t theta,
                    std::uint32_t l, double tau) {
  if (!(tau >= 0.0 && tau < model.lambda())) throw Error("invalid_argument", "tau must lie in [0, lambda)");
  if (!(l < theta && theta <= j)) throw Error("invalid_argument", "need 0 <= l < theta <= j");
  return model.mu(j, k) * model.p(j, k, theta) * binomial_occupation(j, l, tau / model.lambda());
}

DeltaValues delta_functions(const LimitModel& model, double tau) {
  if (!(tau >= 0.0 && tau <= model.lambda())) throw Error("invalid_argument", "tau must lie in [0, lambda]");
  const double x = std::min(1.0, tau / model.lambda());
  DeltaValues out;
  KahanSum total;
  for (const auto& c : model.classes()) {
    for (std::uint32_t t = 0; t <= c.out_degree; ++t) {
      const double v = c.mass * c.threshold[t] * binomial_tail(c.out_degree, x, t);
      out.per_class.push_back({c.out_degree, c.in_degree, t, v});
      total.add(v);
    }
  }
  out.delta = total.sum;
  out.delta_minus = model.lambda() * (cascade_response(model, x) - x);
  return out;
}

}  // namespace contagion
