#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>

#include "qpmcmc/amplitude.hpp"

namespace qpmcmc {

// Counter totals for one search or minimization run. "Oracle evaluations" in
// all reported figures means grover_calls + verify_calls; marking preparation
// is tracked only in time_steps.
struct CostSnapshot {
  std::uint64_t grover_calls = 0;
  std::uint64_t verify_calls = 0;
  std::uint64_t time_steps = 0;
  std::uint64_t target_evals = 0;

  std::uint64_t oracle_evaluations() const { return grover_calls + verify_calls; }

  CostSnapshot operator-(const CostSnapshot& o) const {
    return {grover_calls - o.grover_calls, verify_calls - o.verify_calls,
            time_steps - o.time_steps, target_evals - o.target_evals};
  }

  CostSnapshot& operator+=(const CostSnapshot& o) {
    grover_calls += o.grover_calls;
    verify_calls += o.verify_calls;
    time_steps += o.time_steps;
    target_evals += o.target_evals;
    return *this;
  }
};

inline std::uint64_t ceil_log2(std::size_t n) {
  if (n <= 1) return 0;
  std::uint64_t bits = 0;
  std::size_t v = n - 1;
  while (v > 0) {
    v >>= 1;
    ++bits;
  }
  return bits;
}

// Wraps a marking predicate (and optionally a real-valued score) together
// with the cost counters of the quantum model. The simulator may inspect the
// predicate and score without charge (classical omniscience); only charges
// recorded here enter reported costs.
class CountingOracle {
 public:
  using Predicate = std::function<bool(std::size_t)>;
  using Score = std::function<double(std::size_t)>;

  CountingOracle(std::size_t n_items, Predicate predicate)
      : n_(n_items), predicate_(std::move(predicate)) {
    if (n_ == 0) throw std::invalid_argument("CountingOracle: n_items must be >= 1");
  }

  CountingOracle(std::size_t n_items, Score score)
      : n_(n_items), score_(std::move(score)) {
    if (n_ == 0) throw std::invalid_argument("CountingOracle: n_items must be >= 1");
    threshold_ = std::numeric_limits<double>::infinity();
    predicate_ = [this](std::size_t x) { return score_(x) < threshold_; };
  }

  std::size_t n_items() const { return n_; }

  bool has_score() const { return static_cast<bool>(score_); }

  // Marking threshold for minimization oracles: marked <=> score(x) < thr.
  void set_threshold(double thr) {
    if (!score_) throw std::logic_error("set_threshold requires a score oracle");
    threshold_ = thr;
  }

  // Post-measurement classical check; costs one oracle evaluation.
  bool verify(std::size_t x) {
    if (x >= n_) throw std::invalid_argument("verify: index out of range");
    ++verify_calls_;
    return predicate_(x);
  }

  void charge_grover(std::uint64_t iterations) {
    grover_calls_ += iterations;
    time_steps_ += iterations;
  }

  void charge_marking() { time_steps_ += ceil_log2(n_); }

  // Uncounted access for the simulator itself (eager mark construction,
  // ground-truth diagnostics). Never part of reported costs.
  bool predicate_uncounted(std::size_t x) const { return predicate_(x); }
  double score_uncounted(std::size_t x) const { return score_(x); }

  MarkSet marks_uncounted() const {
    return MarkSet::from_predicate(n_, [this](std::size_t x) { return predicate_(x); });
  }

  std::uint64_t grover_calls() const { return grover_calls_; }
  std::uint64_t verify_calls() const { return verify_calls_; }
  std::uint64_t time_steps() const { return time_steps_; }
  std::uint64_t oracle_evaluations() const { return grover_calls_ + verify_calls_; }

  CostSnapshot snapshot() const {
    return {grover_calls_, verify_calls_, time_steps_, grover_calls_ + verify_calls_};
  }

  void reset() {
    grover_calls_ = 0;
    verify_calls_ = 0;
    time_steps_ = 0;
  }

 private:
  std::size_t n_;
  Predicate predicate_;
  Score score_;
  double threshold_ = 0.0;
  std::uint64_t grover_calls_ = 0;
  std::uint64_t verify_calls_ = 0;
  std::uint64_t time_steps_ = 0;
};

}  // namespace qpmcmc
