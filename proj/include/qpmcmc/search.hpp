#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qpmcmc/amplitude.hpp"
#include "qpmcmc/oracle.hpp"
#include "qpmcmc/rng.hpp"

namespace qpmcmc {

// R = ceil((pi/4) sqrt(N/M)), the canonical iteration count for a search with
// M known solutions. Overshoots the optimum slightly for some (N, M); callers
// that care pass an explicit iteration count instead.
inline std::uint64_t grover_iteration_count(std::size_t n_items, std::size_t n_solutions) {
  if (n_solutions == 0) throw std::invalid_argument("grover_iteration_count: M must be >= 1");
  if (n_solutions > n_items) throw std::invalid_argument("grover_iteration_count: M > N");
  const double r = 0.25 * M_PI * std::sqrt(static_cast<double>(n_items) / static_cast<double>(n_solutions));
  return static_cast<std::uint64_t>(std::ceil(r));
}

struct SearchResult {
  bool found = false;
  std::optional<std::size_t> index;
  CostSnapshot cost;
};

// Fixed-iteration Grover search: uniform register, n_iterations standard
// iterations (one grover charge each), one measurement, one verify.
inline SearchResult grover_search(CountingOracle& oracle, std::uint64_t n_iterations,
                                  RngStream& rng) {
  const CostSnapshot before = oracle.snapshot();
  const MarkSet marks = oracle.marks_uncounted();
  AmplitudeRegister reg(oracle.n_items());
  for (std::uint64_t i = 0; i < n_iterations; ++i) grover_iterate(reg, marks);
  oracle.charge_grover(n_iterations);
  const std::size_t x = measure(reg, rng);
  const bool ok = oracle.verify(x);
  return {ok, ok ? std::optional<std::size_t>(x) : std::nullopt, oracle.snapshot() - before};
}

struct QesaConfig {
  double growth = 6.0 / 5.0;
  std::optional<std::uint64_t> max_grover_calls;  // early-stop cap per invocation
};

// Quantum exponential searching algorithm: randomized iteration counts
// j ~ Uniform{integers < m} with m growing by `growth` up to sqrt(N) after
// each failed round. With a cap, the invocation returns found=false as soon
// as the cumulative grover count for this invocation would exceed it.
inline SearchResult exponential_search(CountingOracle& oracle, const QesaConfig& config,
                                       RngStream& rng) {
  if (config.growth <= 1.0) throw std::invalid_argument("QesaConfig: growth must exceed 1");
  if (config.max_grover_calls && *config.max_grover_calls < 1)
    throw std::invalid_argument("QesaConfig: max_grover_calls must be >= 1");
  const std::size_t n = oracle.n_items();
  const CostSnapshot before = oracle.snapshot();
  const MarkSet marks = oracle.marks_uncounted();
  if (marks.count == 0 && !config.max_grover_calls)
    throw std::invalid_argument("exponential_search: M may be 0, a grover-call cap is required");

  if (n == 1) {
    // j is always 0 here, so one classical guess settles the search.
    const bool ok = oracle.verify(0);
    return {ok, ok ? std::optional<std::size_t>(0) : std::nullopt, oracle.snapshot() - before};
  }

  const double m_max = std::sqrt(static_cast<double>(n));
  double m = 1.0;
  std::uint64_t used = 0;
  for (;;) {
    const std::uint64_t j = rng.below(static_cast<std::uint64_t>(std::ceil(m)));
    if (config.max_grover_calls && used + j > *config.max_grover_calls)
      return {false, std::nullopt, oracle.snapshot() - before};
    AmplitudeRegister reg(n);
    for (std::uint64_t i = 0; i < j; ++i) grover_iterate(reg, marks);
    oracle.charge_grover(j);
    used += j;
    const std::size_t x = measure(reg, rng);
    if (oracle.verify(x))
      return {true, x, oracle.snapshot() - before};
    m = std::min(config.growth * m, m_max);
  }
}

// Configuration of the fixed-point search: error tolerance delta (success is
// guaranteed to be at least 1 - delta^2), lower bound w on lambda = M/N, and
// the odd query-schedule bound L >= ln(2/delta)/sqrt(w).
struct FixedPointConfig {
  double delta;
  double w;
  std::uint64_t L;

  FixedPointConfig(double delta_, double w_, std::uint64_t L_) : delta(delta_), w(w_), L(L_) {
    validate();
  }

  // Smallest odd L satisfying the bound.
  static FixedPointConfig with_min_length(double delta, double w) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("FixedPointConfig: delta in (0,1)");
    if (!(w > 0.0 && w <= 1.0)) throw std::invalid_argument("FixedPointConfig: w in (0,1]");
    auto L = static_cast<std::uint64_t>(std::ceil(std::log(2.0 / delta) / std::sqrt(w)));
    if (L < 1) L = 1;
    if (L % 2 == 0) ++L;
    return FixedPointConfig(delta, w, L);
  }

  std::uint64_t half_length() const { return (L - 1) / 2; }

 private:
  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("FixedPointConfig: delta in (0,1)");
    if (!(w > 0.0 && w <= 1.0)) throw std::invalid_argument("FixedPointConfig: w in (0,1]");
    if (L % 2 == 0) throw std::invalid_argument("FixedPointConfig: L must be odd");
    if (static_cast<double>(L) < std::log(2.0 / delta) / std::sqrt(w))
      throw std::invalid_argument("FixedPointConfig: L below ln(2/delta)/sqrt(w)");
  }
};

// Chebyshev phase schedule (alpha_j, beta_j), j = 1..l with l = (L-1)/2:
//   alpha_j = -beta_{l-j+1} = 2 acot(tan(2 pi j / L) sqrt(1 - gamma^2)),
// where 1/gamma = T_{1/L}(1/delta) is evaluated as cosh(arccosh(1/delta)/L)
// (the |x| > 1 continuation of cos((1/L) acos x)).
inline std::vector<std::pair<double, double>> fixed_point_phases(const FixedPointConfig& config) {
  const std::uint64_t l = config.half_length();
  const double gamma = 1.0 / std::cosh(std::acosh(1.0 / config.delta) / static_cast<double>(config.L));
  const double root = std::sqrt(1.0 - gamma * gamma);
  std::vector<double> alpha(l);
  for (std::uint64_t j = 1; j <= l; ++j) {
    const double t = std::tan(2.0 * M_PI * static_cast<double>(j) / static_cast<double>(config.L));
    alpha[j - 1] = 2.0 * std::atan2(1.0, t * root);  // acot with range (0, pi)
  }
  std::vector<std::pair<double, double>> phases(l);
  for (std::uint64_t j = 1; j <= l; ++j)
    phases[j - 1] = {alpha[j - 1], -alpha[l - j]};
  return phases;
}

// Fixed-point quantum search: the l generalized iterations applied in
// schedule order to a uniform register, one measurement, one verify. Success
// probability is at least 1 - delta^2 whenever M/N >= w.
inline SearchResult fixed_point_search(CountingOracle& oracle, const FixedPointConfig& config,
                                       RngStream& rng) {
  const CostSnapshot before = oracle.snapshot();
  const MarkSet marks = oracle.marks_uncounted();
  AmplitudeRegister reg(oracle.n_items());
  const auto phases = fixed_point_phases(config);
  for (const auto& [alpha, beta] : phases) generalized_grover_iterate(reg, marks, alpha, beta);
  oracle.charge_grover(phases.size());
  const std::size_t x = measure(reg, rng);
  const bool ok = oracle.verify(x);
  return {ok, ok ? std::optional<std::size_t>(x) : std::nullopt, oracle.snapshot() - before};
}

}  // namespace qpmcmc
