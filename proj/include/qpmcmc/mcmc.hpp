#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qpmcmc/gumbel.hpp"
#include "qpmcmc/minimize.hpp"
#include "qpmcmc/oracle.hpp"
#include "qpmcmc/rng.hpp"
#include "qpmcmc/targets.hpp"

namespace qpmcmc {

struct StepRecord {
  CostSnapshot cost;
  bool selection_correct = true;
  bool accepted = false;
  double log_density = 0.0;
};

struct StepOutcome {
  std::size_t selected = 0;  // index into the proposal set; 0 keeps the state
  StepRecord record;
};

enum class Mode { classical, quantum };

struct RunConfig {
  std::uint64_t n_iterations = 1000;
  std::size_t n_proposals = 16;
  std::uint64_t seed = 0;
  bool adapt = true;
  double epsilon = 0.5;                    // qmin outer budget tolerance
  std::optional<std::uint64_t> inner_cap;  // qmin inner-search override
  std::uint64_t burn_in = 0;
};

// One chain's history. Continuous chains store every state; lattice chains
// store the flip log and per-iteration log-densities instead (states are
// reconstructable from the initial configuration).
struct ChainTrace {
  std::size_t dim = 0;
  std::vector<double> states;        // n_iterations x dim when dim > 0
  std::vector<double> log_densities; // per iteration
  std::vector<std::int64_t> flips;   // lattice chains: flipped site or -1
  std::vector<StepRecord> records;

  std::span<const double> state(std::size_t i) const { return {states.data() + i * dim, dim}; }
  std::size_t length() const { return records.size(); }
};

// Classical multiproposal step: select among the current state and P
// proposals with probabilities proportional to pi(theta_p), computed stably
// by max-shifting in log space. Charges one target evaluation per proposal
// plus one for the current state unless a cached value is supplied.
inline StepOutcome pmcmc_step(const ContinuousTarget& target, const ProposalSet& proposals,
                              std::optional<double> cached_current_log_density,
                              RngStream& rng) {
  const std::size_t count = proposals.count();
  std::vector<double> lp(count);
  lp[0] = cached_current_log_density ? *cached_current_log_density
                                     : target.log_density(proposals.state(0));
  for (std::size_t p = 1; p < count; ++p) lp[p] = target.log_density(proposals.state(p));

  const double mx = *std::max_element(lp.begin(), lp.end());
  if (!std::isfinite(mx)) throw std::runtime_error("pmcmc_step: all state densities vanish");
  std::vector<double> w(count);
  for (std::size_t p = 0; p < count; ++p) w[p] = std::exp(lp[p] - mx);
  const std::size_t pick = exact_discrete_sample(w, rng);

  StepOutcome out;
  out.selected = pick;
  out.record.accepted = pick != 0;
  out.record.log_density = lp[pick];
  out.record.selection_correct = true;
  out.record.cost.target_evals = cached_current_log_density ? count - 1 : count;
  return out;
}

namespace detail {

// Shared tail of the quantum step: Gumbel scores are already assembled;
// run warm-started minimization and bill the target the oracle-accounted
// evaluation count.
inline StepOutcome qpmcmc_select(std::span<const double> scores, const QminConfig& base,
                                 RngStream& rng) {
  CountingOracle oracle(scores.size(), CountingOracle::Score([scores](std::size_t p) {
                          return scores[p];
                        }));
  QminConfig cfg = base;
  cfg.warm_start = 0;
  const QminResult res = quantum_minimize(oracle, cfg, rng);
  StepOutcome out;
  out.selected = res.argmin_candidate;
  out.record.selection_correct = res.is_true_min;
  out.record.accepted = res.argmin_candidate != 0;
  out.record.cost = res.cost;
  return out;
}

}  // namespace detail

// Quantum multiproposal step: fresh Gumbel noise turns selection into
// minimizing f(p) = -(z_p + log pi(theta_p)), solved by warm-started quantum
// minimization at p = 0. Target evaluations are charged at the oracle-
// accounted amount rather than P+1.
inline StepOutcome qpmcmc_step(const ContinuousTarget& target, const ProposalSet& proposals,
                               const QminConfig& qmin_config,
                               std::optional<double> cached_current_log_density,
                               RngStream& rng) {
  const std::size_t count = proposals.count();
  std::vector<double> lp(count), scores(count);
  lp[0] = cached_current_log_density ? *cached_current_log_density
                                     : target.log_density_uncounted(proposals.state(0));
  for (std::size_t p = 1; p < count; ++p)
    lp[p] = target.log_density_uncounted(proposals.state(p));
  for (std::size_t p = 0; p < count; ++p) scores[p] = -(rng.gumbel() + lp[p]);

  StepOutcome out = detail::qpmcmc_select(scores, qmin_config, rng);
  out.record.log_density = lp[out.selected];
  target.charge_evals(out.record.cost.oracle_evaluations());
  out.record.cost.target_evals = out.record.cost.oracle_evaluations();
  return out;
}

// Classical step over single-flip lattice proposals (uniform proposal kernel,
// so the simplified acceptance probabilities apply directly).
inline StepOutcome ising_pmcmc_step(IsingLattice& lattice, const SingleFlipProposalSet& proposals,
                                    double current_log_density, RngStream& rng) {
  const std::size_t count = proposals.count();
  std::vector<double> lp(count);
  lp[0] = current_log_density;
  for (std::size_t p = 1; p < count; ++p)
    lp[p] = current_log_density + lattice.flip_delta(proposals.sites[p - 1]);
  const double mx = *std::max_element(lp.begin(), lp.end());
  std::vector<double> w(count);
  for (std::size_t p = 0; p < count; ++p) w[p] = std::exp(lp[p] - mx);
  const std::size_t pick = exact_discrete_sample(w, rng);

  StepOutcome out;
  out.selected = pick;
  out.record.accepted = pick != 0;
  out.record.log_density = lp[pick];
  out.record.cost.target_evals = count;  // one density per state per iteration
  if (pick != 0) lattice.flip(proposals.sites[pick - 1]);
  return out;
}

// Quantum step over single-flip proposals; scores come from the incremental
// flip deltas and the selected flip is applied in place.
inline StepOutcome ising_qpmcmc_step(IsingLattice& lattice, const SingleFlipProposalSet& proposals,
                                     const QminConfig& qmin_config, double current_log_density,
                                     RngStream& rng) {
  const std::size_t count = proposals.count();
  std::vector<double> lp(count), scores(count);
  lp[0] = current_log_density;
  for (std::size_t p = 1; p < count; ++p)
    lp[p] = current_log_density + lattice.flip_delta(proposals.sites[p - 1]);
  for (std::size_t p = 0; p < count; ++p) scores[p] = -(rng.gumbel() + lp[p]);

  StepOutcome out = detail::qpmcmc_select(scores, qmin_config, rng);
  out.record.log_density = lp[out.selected];
  out.record.cost.target_evals = out.record.cost.oracle_evaluations();
  if (out.selected != 0) lattice.flip(proposals.sites[out.selected - 1]);
  return out;
}

// Full chain over a continuous target. Deterministic given config.seed;
// multi-chain callers derive per-chain streams as (seed, chain_id).
inline ChainTrace run_chain(const ContinuousTarget& target, std::span<const double> init,
                            const RunConfig& config, Mode mode) {
  if (config.n_iterations == 0) throw std::invalid_argument("run_chain: S must be >= 1");
  if (init.size() != target.dim()) throw std::invalid_argument("run_chain: init dimension");
  RngStream rng(config.seed);
  AdaptationState adaptation;

  ChainTrace trace;
  trace.dim = target.dim();
  trace.states.reserve(config.n_iterations * trace.dim);
  trace.log_densities.reserve(config.n_iterations);
  trace.records.reserve(config.n_iterations);

  std::vector<double> current(init.begin(), init.end());
  double current_lp = mode == Mode::classical ? target.log_density(current)
                                              : target.log_density_uncounted(current);
  QminConfig qcfg;
  qcfg.epsilon = config.epsilon;
  qcfg.inner_cap = config.inner_cap;

  for (std::uint64_t s = 0; s < config.n_iterations; ++s) {
    const ProposalSet props =
        centered_gaussian_proposals(current, adaptation.scale(), config.n_proposals, rng);
    StepOutcome out = mode == Mode::classical
                          ? pmcmc_step(target, props, current_lp, rng)
                          : qpmcmc_step(target, props, qcfg, current_lp, rng);
    if (out.selected != 0) {
      const auto chosen = props.state(out.selected);
      std::copy(chosen.begin(), chosen.end(), current.begin());
      current_lp = out.record.log_density;
    }
    if (config.adapt) adapt_scale(adaptation, out.record.accepted);
    trace.states.insert(trace.states.end(), current.begin(), current.end());
    trace.log_densities.push_back(current_lp);
    trace.records.push_back(out.record);
  }
  return trace;
}

// Full chain over a lattice target; the lattice evolves in place.
inline ChainTrace run_ising_chain(IsingLattice& lattice, const RunConfig& config, Mode mode) {
  if (config.n_iterations == 0) throw std::invalid_argument("run_ising_chain: S must be >= 1");
  RngStream rng(config.seed);
  ChainTrace trace;
  trace.dim = 0;
  trace.log_densities.reserve(config.n_iterations);
  trace.flips.reserve(config.n_iterations);
  trace.records.reserve(config.n_iterations);

  double current_lp = lattice.log_density();
  QminConfig qcfg;
  qcfg.epsilon = config.epsilon;
  qcfg.inner_cap = config.inner_cap;

  for (std::uint64_t s = 0; s < config.n_iterations; ++s) {
    const SingleFlipProposalSet props = single_flip_proposals(lattice, config.n_proposals, rng);
    StepOutcome out = mode == Mode::classical
                          ? ising_pmcmc_step(lattice, props, current_lp, rng)
                          : ising_qpmcmc_step(lattice, props, qcfg, current_lp, rng);
    current_lp = out.record.log_density;
    trace.flips.push_back(out.selected == 0 ? -1
                                            : static_cast<std::int64_t>(props.sites[out.selected - 1]));
    trace.log_densities.push_back(current_lp);
    trace.records.push_back(out.record);
  }
  return trace;
}

}  // namespace qpmcmc
