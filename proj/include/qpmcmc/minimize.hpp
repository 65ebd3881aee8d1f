#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "qpmcmc/oracle.hpp"
#include "qpmcmc/rng.hpp"
#include "qpmcmc/search.hpp"

namespace qpmcmc {

// Expected-time bound for minimization from a uniform start:
// m0 = (45/4) sqrt(N) + (7/10) log2(N).
inline double qmin_budget(std::size_t n_items) {
  const double n = static_cast<double>(n_items);
  return 11.25 * std::sqrt(n) + 0.7 * std::log2(n);
}

// Warm-start bound when only K-1 items lie below the initial threshold:
// m0^K = (5/4 - 1/sqrt(K-1)) 9 sqrt(N) + (7/10) log2(K) log2(N).
inline double warm_start_budget(std::size_t n_items, std::size_t start_rank) {
  if (start_rank < 2) throw std::invalid_argument("warm_start_budget: K must be >= 2");
  if (start_rank > n_items) throw std::invalid_argument("warm_start_budget: K > N");
  const double n = static_cast<double>(n_items);
  const double k = static_cast<double>(start_rank);
  return (1.25 - 1.0 / std::sqrt(k - 1.0)) * 9.0 * std::sqrt(n) +
         0.7 * std::log2(k) * std::log2(n);
}

inline std::uint64_t default_inner_cap(std::size_t n_items) {
  return static_cast<std::uint64_t>(std::ceil(2.25 * std::sqrt(static_cast<double>(n_items))));
}

struct QminConfig {
  double epsilon = 0.5;                        // outer time-budget tolerance
  std::optional<std::size_t> warm_start;       // initial threshold index
  std::optional<std::uint64_t> inner_cap;      // grover-call cap per inner search
};

struct QminResult {
  std::size_t argmin_candidate = 0;
  bool is_true_min = false;  // simulator omniscience, diagnostics only
  CostSnapshot cost;
  std::uint64_t threshold_updates = 0;
};

// Quantum minimum searching: alternate between marking the strictly-better
// set and running a capped exponential search over it. An inner search that
// exhausts its cap without a verified improvement is taken as evidence of
// minimality and stops the loop (early stopping). The outer s < m0/epsilon
// budget counts marking and grover time steps; verify calls consume none.
inline QminResult quantum_minimize(CountingOracle& oracle, const QminConfig& config,
                                   RngStream& rng) {
  if (!oracle.has_score()) throw std::invalid_argument("quantum_minimize: oracle lacks a score");
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw std::invalid_argument("quantum_minimize: epsilon in (0,1)");
  const std::size_t n = oracle.n_items();
  if (config.warm_start && *config.warm_start >= n)
    throw std::invalid_argument("quantum_minimize: warm_start out of range");

  const CostSnapshot before = oracle.snapshot();
  std::size_t x0 = config.warm_start ? *config.warm_start : rng.below(n);
  double threshold = oracle.score_uncounted(x0);

  QesaConfig inner;
  inner.max_grover_calls = config.inner_cap ? *config.inner_cap : default_inner_cap(n);
  const double budget = qmin_budget(n) / config.epsilon;

  std::uint64_t updates = 0;
  while (static_cast<double>(oracle.time_steps() - before.time_steps) < budget) {
    oracle.set_threshold(threshold);
    oracle.charge_marking();
    const SearchResult res = exponential_search(oracle, inner, rng);
    if (!res.found) break;
    x0 = *res.index;
    threshold = oracle.score_uncounted(x0);  // value observed by the verify call
    ++updates;
  }

  std::size_t true_min = 0;
  double best = oracle.score_uncounted(0);
  for (std::size_t x = 1; x < n; ++x) {
    const double s = oracle.score_uncounted(x);
    if (s < best) {
      best = s;
      true_min = x;
    }
  }
  return {x0, x0 == true_min, oracle.snapshot() - before, updates};
}

}  // namespace qpmcmc
