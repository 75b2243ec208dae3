#include "contagion/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "contagion/cascade.hpp"
#include "contagion/error.hpp"
#include "contagion/rng.hpp"

namespace contagion {

namespace {

const ClassDistribution* find_class(const std::vector<ClassDistribution>& classes, std::uint32_t j,
                                    std::uint32_t k) {
  auto it = std::lower_bound(classes.begin(), classes.end(), std::pair{j, k},
                             [](const ClassDistribution& c, const std::pair<std::uint32_t, std::uint32_t>& key) {
                               return std::pair{c.out_degree, c.in_degree} < key;
                             });
  if (it == classes.end() || it->out_degree != j || it->in_degree != k) return nullptr;
  return &*it;
}

double binomial_count(std::uint32_t n, std::uint32_t r) {
  double c = 1.0;
  for (std::uint32_t i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

/// Counts, per subset size, the subsets whose total loss exceeds capital.
/// Theta <= t exactly when the first t losses in the order already exceed
/// capital, so these counts give the cdf of theta over all orders.
std::vector<double> exact_distribution(double capital, double lgd, std::span<const Exposure> ex) {
  const auto j = static_cast<std::uint32_t>(ex.size());
  std::vector<double> exceeding(j + 1, 0.0);
  const std::uint32_t subsets = 1u << j;
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    double loss = 0.0;
    for (std::uint32_t b = 0; b < j; ++b) {
      if (mask & (1u << b)) loss += lgd * ex[b].weight;
    }
    if (capital < loss) exceeding[std::popcount(mask)] += 1.0;
  }
  std::vector<double> nu(j + 2, 0.0);
  double previous = 0.0;
  for (std::uint32_t t = 1; t <= j; ++t) {
    const double cdf = exceeding[t] / binomial_count(j, t);
    nu[t] = cdf - previous;
    previous = cdf;
  }
  nu[j + 1] = 1.0 - previous;
  return nu;
}

std::vector<double> sampled_distribution(double capital, double lgd, std::span<const Exposure> ex,
                                         NodeId node, const MeasureOptions& options) {
  const auto j = ex.size();
  // Counted in units of one draw so the law sums to exactly 1.
  std::vector<double> count(j + 2, 0.0);
  const std::size_t draws = std::max<std::size_t>(1, (options.perm_budget + j - 1) / j);
  Stream rng(options.seed, StreamTag::kMeasure, node);
  std::vector<std::uint32_t> rest(j - 1);
  for (std::size_t first = 0; first < j; ++first) {
    if (capital < lgd * ex[first].weight) {
      count[1] += static_cast<double>(draws);
      continue;
    }
    for (std::size_t d = 0; d < draws; ++d) {
      std::uint32_t pos = 0;
      for (std::uint32_t x = 0; x < j; ++x) {
        if (x != first) rest[pos++] = x;
      }
      rng.shuffle(std::span<std::uint32_t>(rest));
      const auto theta = first_overflow(capital, lgd, j, [&](std::size_t k) {
        return k == 0 ? ex[first].weight : ex[rest[k - 1]].weight;
      });
      count[theta] += 1.0;
    }
  }
  const double total = static_cast<double>(j * draws);
  std::vector<double> nu(j + 2, 0.0);
  for (std::size_t t = 0; t < nu.size(); ++t) nu[t] = count[t] / total;
  return nu;
}

EmpiricalMeasures aggregate(const FinancialNetwork& network, const std::vector<std::vector<double>>& per_node) {
  EmpiricalMeasures out;
  out.n = network.size();
  out.m = network.edge_count();
  if (out.n == 0) throw Error("invalid_network", "empty network");
  out.lambda = static_cast<double>(out.m) / static_cast<double>(out.n);

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<std::size_t, std::vector<double>>> acc;
  double squares = 0.0;
  for (NodeId i = 0; i < out.n; ++i) {
    const auto j = network.out_degree(i);
    const auto k = network.in_degree(i);
    squares += static_cast<double>(j) * j + static_cast<double>(k) * k;
    auto& slot = acc[{j, k}];
    ++slot.first;
    if (!per_node.empty()) {
      slot.second.resize(j + 1, 0.0);
      for (std::uint32_t t = 0; t <= j; ++t) slot.second[t] += per_node[i][t];
    }
  }
  out.second_moment = squares / static_cast<double>(out.n);
  out.classes.reserve(acc.size());
  for (auto& [key, slot] : acc) {
    ClassDistribution c;
    c.out_degree = key.first;
    c.in_degree = key.second;
    c.mass = static_cast<double>(slot.first) / static_cast<double>(out.n);
    c.threshold = std::move(slot.second);
    for (auto& v : c.threshold) v /= static_cast<double>(slot.first);
    out.classes.push_back(std::move(c));
  }
  return out;
}

}  // namespace

double EmpiricalMeasures::mu(std::uint32_t j, std::uint32_t k) const noexcept {
  const auto* c = find_class(classes, j, k);
  return c ? c->mass : 0.0;
}

double EmpiricalMeasures::p(std::uint32_t j, std::uint32_t k, std::uint32_t theta) const noexcept {
  const auto* c = find_class(classes, j, k);
  return c ? c->p(theta) : 0.0;
}

std::vector<double> threshold_distribution(const FinancialNetwork& network, NodeId node,
                                           const MeasureOptions& options) {
  if (options.perm_budget < 1) throw Error("invalid_argument", "perm_budget must be >= 1");
  const auto ex = network.exposures(node);
  const auto j = ex.size();
  if (network.gamma(node) == 0.0) {
    std::vector<double> nu(j + 2, 0.0);
    nu[0] = 1.0;
    return nu;
  }
  if (j == 0) return {0.0, 1.0};
  const double capital = network.capital(node);
  const double lgd = network.loss_given_default();
  if (j <= options.exact_max_degree && j < 31) return exact_distribution(capital, lgd, ex);
  return sampled_distribution(capital, lgd, ex, node, options);
}

EmpiricalMeasures empirical_measures(const FinancialNetwork& network, const MeasureOptions& options) {
  if (options.perm_budget < 1) throw Error("invalid_argument", "perm_budget must be >= 1");
  const auto n = static_cast<std::ptrdiff_t>(network.size());
  std::vector<std::vector<double>> per_node(network.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    per_node[i] = threshold_distribution(network, static_cast<NodeId>(i), options);
  }
  return aggregate(network, per_node);
}

EmpiricalMeasures empirical_measures_serial(const FinancialNetwork& network, const MeasureOptions& options) {
  if (options.perm_budget < 1) throw Error("invalid_argument", "perm_budget must be >= 1");
  std::vector<std::vector<double>> per_node(network.size());
  for (NodeId i = 0; i < network.size(); ++i) per_node[i] = threshold_distribution(network, i, options);
  return aggregate(network, per_node);
}

EmpiricalMeasures degree_measures(const DegreeSequence& degrees) {
  const auto m = degrees.edge_count();
  EmpiricalMeasures out;
  out.n = degrees.size();
  out.m = m;
  if (out.n == 0) throw Error("invalid_argument", "empty degree sequence");
  out.lambda = static_cast<double>(m) / static_cast<double>(out.n);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> counts;
  double squares = 0.0;
  for (std::size_t i = 0; i < out.n; ++i) {
    const double j = degrees.out[i];
    const double k = degrees.in[i];
    squares += j * j + k * k;
    ++counts[{degrees.out[i], degrees.in[i]}];
  }
  out.second_moment = squares / static_cast<double>(out.n);
  for (const auto& [key, count] : counts) {
    out.classes.push_back({key.first, key.second, static_cast<double>(count) / static_cast<double>(out.n), {}});
  }
  return out;
}

double FirstOrderMeasures::amplification_ratio() const noexcept {
  if (susceptibility >= 1.0) return std::numeric_limits<double>::infinity();
  return 1.0 + spread / (1.0 - susceptibility);
}

FirstOrderMeasures first_order_measures(const FinancialNetwork& network) {
  const auto n = network.size();
  if (n == 0 || network.edge_count() == 0) throw Error("zero_mean_degree", "network has no edges");
  const auto c_plus = contagious_out_degrees(network);
  double weighted = 0.0, total = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    weighted += static_cast<double>(network.in_degree(i)) * static_cast<double>(c_plus[i]);
    total += static_cast<double>(c_plus[i]);
  }
  FirstOrderMeasures out;
  out.lambda = static_cast<double>(network.edge_count()) / static_cast<double>(n);
  out.susceptibility = weighted / (static_cast<double>(n) * out.lambda);
  out.spread = total / static_cast<double>(n);
  return out;
}

AssumptionReport validate_asymptotic_assumptions(std::span<const EmpiricalMeasures> sequence) {
  if (sequence.size() < 2) throw Error("invalid_argument", "need measures for at least two sizes");
  AssumptionReport report;
  for (const auto& m : sequence) {
    report.sizes.push_back(m.n);
    report.lambdas.push_back(m.lambda);
    report.second_moments.push_back(m.second_moment);
  }
  for (std::size_t s = 1; s < sequence.size(); ++s) {
    const auto& a = sequence[s - 1];
    const auto& b = sequence[s];
    double drift = 0.0;
    for (const auto& c : a.classes) drift = std::max(drift, std::abs(c.mass - b.mu(c.out_degree, c.in_degree)));
    for (const auto& c : b.classes) drift = std::max(drift, std::abs(c.mass - a.mu(c.out_degree, c.in_degree)));
    report.mu_drift.push_back(drift);
    report.lambda_drift.push_back(std::abs(a.lambda - b.lambda));
  }
  // Consecutive drifts should not grow; the second moment per node should not
  // blow up faster than the sizes do.
  for (std::size_t s = 1; s < report.mu_drift.size(); ++s) {
    if (report.mu_drift[s] > report.mu_drift[s - 1] + 1e-12) report.mu_stabilizing = false;
    if (report.lambda_drift[s] > report.lambda_drift[s - 1] + 1e-12) report.lambda_converging = false;
  }
  const double first = report.second_moments.front();
  const double last = report.second_moments.back();
  const double growth = static_cast<double>(report.sizes.back()) / static_cast<double>(report.sizes.front());
  if (first > 0.0 && growth > 1.0 && last / first > std::sqrt(growth)) report.second_moment_bounded = false;
  for (double v : report.second_moments) {
    if (!std::isfinite(v)) report.second_moment_bounded = false;
  }
  if (!report.mu_stabilizing) report.notes.push_back("degree distribution drift is not decreasing");
  if (!report.lambda_converging) report.notes.push_back("mean degree drift is not decreasing");
  if (!report.second_moment_bounded) report.notes.push_back("second moment grows with n");
  return report;
}

}  // namespace contagion
