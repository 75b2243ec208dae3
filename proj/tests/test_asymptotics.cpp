#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

#include "contagion/asymptotics.hpp"
#include "contagion/error.hpp"
#include "contagion/experiments.hpp"
#include "contagion/limit_model.hpp"

using namespace contagion;

namespace {

LimitModel single_class(std::uint32_t j, std::uint32_t k, std::vector<double> p) {
  return LimitModel({{j, k, 1.0, std::move(p)}});
}

/// P(at least theta of j hits) by summing over all 2^j outcomes.
double enumerate_tail(std::uint32_t j, double pi, std::uint32_t theta) {
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << j); ++mask) {
    double pr = 1.0;
    std::uint32_t hits = 0;
    for (std::uint32_t b = 0; b < j; ++b) {
      if (mask & (1u << b)) {
        pr *= pi;
        ++hits;
      } else {
        pr *= 1.0 - pi;
      }
    }
    if (hits >= theta) total += pr;
  }
  return total;
}

}  // namespace

TEST_CASE("limit model validation") {
  CHECK_NOTHROW(single_class(2, 2, {0.0, 1.0}));
  CHECK_THROWS_AS(LimitModel({{2, 2, 0.5, {}}}), Error);
  CHECK_THROWS_AS(LimitModel({{2, 1, 1.0, {}}}), Error);
  CHECK_THROWS_AS(LimitModel({{2, 2, 1.0, {0.0, 0.0, 0.0, 0.5}}}), Error);
  CHECK_THROWS_AS(LimitModel({{2, 2, 1.0, {0.7, 0.7}}}), Error);
  CHECK_THROWS_AS(LimitModel({{2, 2, 1.0, {-0.1, 0.5}}}), Error);
  CHECK_THROWS_AS(LimitModel({{2, 2, 0.5, {}}, {2, 2, 0.5, {}}}), Error);
  CHECK_THROWS_AS(LimitModel({{2, 2, -0.5, {}}, {1, 1, 1.5, {}}}), Error);
  try {
    LimitModel({{0, 0, 1.0, {}}});
    FAIL("expected zero_mean_degree");
  } catch (const Error& e) {
    CHECK(std::string(e.code()) == "zero_mean_degree");
  }
  const auto m = LimitModel({{4, 2, 1.0 / 3, {0.0, 0.25}}, {1, 2, 2.0 / 3, {0.0, 1.0}}});
  CHECK(m.lambda() == doctest::Approx(2.0));
  CHECK(m.classes().front().out_degree == 1);
  CHECK(m.p(4, 2, 1) == 0.25);
  CHECK(m.p(4, 2, 3) == 0.0);
  CHECK(m.mu(3, 3) == 0.0);
}

TEST_CASE("binomial tail matches exhaustive enumeration") {
  for (std::uint32_t j = 0; j <= 10; ++j) {
    for (double pi : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      for (std::uint32_t theta = 0; theta <= j; ++theta) {
        CHECK(std::abs(binomial_tail(j, pi, theta) - enumerate_tail(j, pi, theta)) <= 1e-12);
      }
    }
  }
  CHECK(binomial_tail(3, 0.4, 4) == 0.0);
  CHECK_THROWS_AS(binomial_tail(3, 1.5, 1), Error);
  CHECK_THROWS_AS(binomial_tail(3, -0.1, 1), Error);
  // Large j goes through logs and must still be a probability.
  const double big = binomial_tail(500, 0.3, 150);
  CHECK(big > 0.4);
  CHECK(big < 0.6);
}

TEST_CASE("resilience of the printed connectivity examples") {
  CHECK(std::abs(resilience(scenario_limit_model(preset_scenario("connectivity_1"))) - 0.25) <= 1e-12);
  CHECK(std::abs(resilience(scenario_limit_model(preset_scenario("connectivity_2"))) - 1.0 / 3.0) <= 1e-12);
  CHECK(std::abs(resilience(scenario_limit_model(preset_scenario("connectivity_3"))) - 1.0) <= 1e-12);
  CHECK(resilience(scenario_limit_model(preset_scenario("two_regular"))) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(preset_scenario("nope"), Error);
}

TEST_CASE("least fixed point of a cubic response") {
  // mu(3,3) = 1 with theta = 2 and 1% seeds: I(pi) = 0.01 + 0.99 (3 pi^2 - 2 pi^3).
  const auto model = single_class(3, 3, {0.01, 0.0, 0.99});
  auto poly = [](double x) { return 0.01 + 0.99 * (3 * x * x - 2 * x * x * x) - x; };
  double lo = 0.0, hi = 0.1;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (poly(mid) > 0.0 ? lo : hi) = mid;
  }
  const auto fp = smallest_fixed_point(model);
  CHECK(fp.converged);
  CHECK(fp.pi_star == doctest::Approx(lo).epsilon(1e-10));
  CHECK(fp.stable);
  CHECK_FALSE(fp.near_critical);
  CHECK(fp.derivative == doctest::Approx(0.99 * (6 * lo - 6 * lo * lo)).epsilon(1e-5));
  const auto af = asymptotic_fraction(model);
  CHECK(af.regime == ContagionRegime::kStable);
  CHECK(af.fraction == doctest::Approx(poly(lo) + lo).epsilon(1e-10));
  CHECK(af.fraction == doctest::Approx(0.010314).epsilon(1e-4));
}

TEST_CASE("total contagion and fixed point properties") {
  const auto total = asymptotic_fraction(scenario_limit_model(
      ClassScenario{{{2, 2, 1.0}}, 0.4, 0.0, 0.01}));
  CHECK(total.regime == ContagionRegime::kTotal);
  CHECK(total.fraction == 1.0);
  CHECK(to_string(ContagionRegime::kTotal) == "total");
  CHECK(to_string(ContagionRegime::kCritical) == "critical");

  // Random models: pi* is a fixed point and nothing below it is.
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto net = testing::random_network(40, 0.08, 500 + s, 0.6, 0.05);
    const auto model = LimitModel::from_measures(empirical_measures(net));
    const auto fp = smallest_fixed_point(model);
    CHECK(fp.residual <= 1e-12);
    CHECK(std::abs(cascade_response(model, fp.pi_star) - fp.pi_star) <= 1e-12);
    for (int g = 1; g < 50; ++g) {
      const double x = fp.pi_star * g / 50.0;
      CHECK(cascade_response(model, x) - x > -1e-12);
    }
  }
}

TEST_CASE("first-order amplification on a network equals the limit model formula") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto net = testing::random_network(60, 0.05, 900 + s, 0.6, 0.0);
    const auto fo = first_order_measures(net);
    const auto model = LimitModel::from_measures(empirical_measures(net));
    CHECK(susceptibility(model) == doctest::Approx(fo.susceptibility).epsilon(1e-12));
    if (fo.susceptibility >= 1.0) {
      CHECK_THROWS_AS(amplification(model, 0.01), Error);
      continue;
    }
    const auto a = amplification(model, 0.01);
    CHECK(a.ratio == doctest::Approx(fo.amplification_ratio()).epsilon(1e-12));
    CHECK(a.fraction == doctest::Approx(0.01 * a.ratio).epsilon(1e-12));
  }
}

TEST_CASE("targeted amplification") {
  const auto model = scenario_limit_model(preset_scenario("connectivity_1"));
  const double s = 0.75;
  CHECK(targeted_amplification(model, 4, 3, 0.1) == doctest::Approx(0.1 * 0.25 * (1.0 + 1.0 * s / (1 - s))));
  CHECK_THROWS_AS(targeted_amplification(model, 9, 9, 0.1), Error);
  CHECK_THROWS_AS(targeted_amplification(scenario_limit_model(preset_scenario("two_regular")), 2, 2, 0.1), Error);
}

TEST_CASE("branching extinction") {
  CHECK(branching_extinction(scenario_limit_model(preset_scenario("connectivity_1"))) == 1.0);
  CHECK(branching_extinction(scenario_limit_model(preset_scenario("two_regular"))) == doctest::Approx(0.0));
  const auto m = LimitModel({{1, 3, 0.5, {0.0, 1.0}}, {3, 1, 0.5, {0.0, 0.5}}});
  const double y = branching_extinction(m);
  const double f = 0.25 * y * y * y + 0.75 * (0.5 + 0.5 * y);
  CHECK(y == doctest::Approx(f).epsilon(1e-12));
  CHECK(y > 0.0);
  CHECK(y < 1.0);
}

TEST_CASE("closed-form ODE solution satisfies the differential system") {
  const auto model = LimitModel({{3, 4, 0.4, {0.05, 0.3, 0.4, 0.2}},
                                 {1, 5, 0.2, {0.1, 0.9}},
                                 {5, 2, 0.4, {0.0, 0.1, 0.2, 0.3, 0.2, 0.1}}});
  const double lambda = model.lambda();
  Stream rng(77, StreamTag::kSample, 0);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& c = model.classes()[rng.below(model.classes().size())];
    const auto j = c.out_degree;
    const auto theta = 1 + static_cast<std::uint32_t>(rng.below(j));
    const auto l = static_cast<std::uint32_t>(rng.below(theta));
    const double tau = (0.02 + 0.9 * rng.uniform()) * lambda;
    auto s = [&](std::uint32_t ll, double t) {
      return ode_solution(model, j, c.in_degree, theta, ll, t);
    };
    const double lhs = (s(l, tau + h) - s(l, tau - h)) / (2 * h);
    const double inflow = l == 0 ? 0.0 : (j - l + 1) * s(l - 1, tau);
    const double rhs = (inflow - (j - l) * s(l, tau)) / (lambda - tau);
    CHECK(std::abs(lhs - rhs) <= 1e-6);
  }
  // Initial condition: everything at l = 0.
  CHECK(ode_solution(model, 3, 4, 2, 0, 0.0) == doctest::Approx(0.4 * 0.4));
  CHECK(ode_solution(model, 3, 4, 2, 1, 0.0) == 0.0);
  CHECK_THROWS_AS(ode_solution(model, 3, 4, 2, 2, 0.5), Error);
  CHECK_THROWS_AS(ode_solution(model, 3, 4, 2, 0, lambda), Error);
}

TEST_CASE("delta functions") {
  const auto model = LimitModel({{3, 4, 0.4, {0.05, 0.3, 0.4, 0.2}},
                                 {1, 5, 0.2, {0.1, 0.9}},
                                 {5, 2, 0.4, {0.0, 0.1, 0.2, 0.3, 0.2, 0.1}}});
  for (double x : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const double tau = x * model.lambda();
    const auto d = delta_functions(model, tau);
    double sum = 0.0;
    for (const auto& e : d.per_class) sum += e.value;
    CHECK(d.delta == doctest::Approx(sum).epsilon(1e-12));
    CHECK(d.delta == doctest::Approx(default_fraction_at(model, x)).epsilon(1e-12));
    CHECK(d.delta_minus == doctest::Approx(model.lambda() * (cascade_response(model, x) - x)));
  }
  const auto at0 = delta_functions(model, 0.0);
  CHECK(at0.delta == doctest::Approx(0.4 * 0.05 + 0.2 * 0.1));
  CHECK_THROWS_AS(delta_functions(model, -0.1), Error);
}
