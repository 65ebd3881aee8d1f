#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qpmcmc/diagnostics.hpp"
#include "qpmcmc/mcmc.hpp"
#include "qpmcmc/parallel.hpp"

namespace qpmcmc::experiments {

// Stable stream tags, one per experiment family.
enum StreamTag : std::uint64_t {
  kGroverCurves = 1,
  kSearchBench = 2,
  kQminBench = 3,
  kQpmcmcNormal = 4,
  kMixtureRace = 5,
  kIsingRuns = 6,
  kMixingCompare = 7,
};

// ---------------------------------------------------------------------------
// Success curves, computed exactly from the amplitudes (no sampling).

struct GroverCurveRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t iterations = 0;
  double success = 0.0;
};

inline std::vector<GroverCurveRow> grover_curves(std::size_t n,
                                                 const std::vector<std::size_t>& m_list,
                                                 std::uint64_t max_iters) {
  std::vector<GroverCurveRow> rows;
  rows.reserve(m_list.size() * (max_iters + 1));
  for (std::size_t m : m_list) {
    MarkSet marks = MarkSet::none(n);
    for (std::size_t i = 0; i < m; ++i) marks.set(i);
    AmplitudeRegister reg(n);
    rows.push_back({n, m, 0, reg.marked_probability(marks)});
    for (std::uint64_t j = 1; j <= max_iters; ++j) {
      grover_iterate(reg, marks);
      rows.push_back({n, m, j, reg.marked_probability(marks)});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Search benchmarks (QESA and FPQS run to completion on M >= 1 problems).

struct SearchBenchRow {
  std::string algorithm;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t replicate = 0;
  bool found = false;
  CostSnapshot cost;
};

inline CountingOracle first_m_marked_oracle(std::size_t n, std::size_t m) {
  return CountingOracle(n, CountingOracle::Predicate([m](std::size_t x) { return x < m; }));
}

// One QESA invocation per replicate; terminates because M >= 1.
inline std::vector<SearchBenchRow> qesa_bench(std::size_t n, std::size_t m,
                                              std::uint64_t replicates, std::uint64_t seed,
                                              unsigned threads) {
  std::vector<SearchBenchRow> rows(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    RngStream rng = RngStream::derive(seed, kSearchBench, 1, n, m, r);
    CountingOracle oracle = first_m_marked_oracle(n, m);
    const SearchResult res = exponential_search(oracle, QesaConfig{}, rng);
    rows[r] = {"qesa", n, m, r, res.found, res.cost};
  });
  return rows;
}

// FPQS attempts repeat until a solution is verified; costs accumulate.
inline std::vector<SearchBenchRow> fpqs_bench(std::size_t n, std::size_t m, double delta,
                                              double w, std::uint64_t replicates,
                                              std::uint64_t seed, unsigned threads) {
  const FixedPointConfig config = FixedPointConfig::with_min_length(delta, w);
  std::vector<SearchBenchRow> rows(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    RngStream rng = RngStream::derive(seed, kSearchBench, 2, n, m, r);
    CountingOracle oracle = first_m_marked_oracle(n, m);
    SearchResult res;
    do {
      res = fixed_point_search(oracle, config, rng);
    } while (!res.found);
    rows[r] = {"fpqs", n, m, r, true, oracle.snapshot()};
  });
  return rows;
}

struct FpqsSuccessRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double lambda = 0.0;
  double w = 0.0;
  std::uint64_t replicates = 0;
  std::uint64_t successes = 0;
};

// Single-attempt success frequencies for a grid of solution fractions.
inline FpqsSuccessRow fpqs_success_point(std::size_t n, std::size_t m, double delta, double w,
                                         std::uint64_t replicates, std::uint64_t seed,
                                         unsigned threads) {
  const FixedPointConfig config = FixedPointConfig::with_min_length(delta, w);
  std::vector<std::uint8_t> ok(replicates, 0);
  parallel_for(replicates, threads, [&](std::size_t r) {
    RngStream rng = RngStream::derive(seed, kSearchBench, 3, n, m, r);
    CountingOracle oracle = first_m_marked_oracle(n, m);
    ok[r] = fixed_point_search(oracle, config, rng).found ? 1 : 0;
  });
  const std::uint64_t successes = std::accumulate(ok.begin(), ok.end(), std::uint64_t{0});
  return {n, m, static_cast<double>(m) / static_cast<double>(n), w, replicates, successes};
}

// ---------------------------------------------------------------------------
// Quantum minimization benchmark over random score tables.

struct QminBenchRow {
  std::size_t n = 0;
  std::string start_rank;    // "1", "2", ..., or "random"
  std::uint64_t replicate = 0;
  std::uint64_t oracle_evals = 0;
  std::uint64_t time_steps = 0;
  bool success = false;
};

struct RankSpec {
  std::string label;
  std::optional<std::size_t> rank;  // nullopt = uniform random start
};

inline std::vector<QminBenchRow> qmin_bench(const std::vector<std::size_t>& sizes,
                                            const std::vector<RankSpec>& ranks,
                                            std::uint64_t replicates, double epsilon,
                                            std::optional<std::uint64_t> inner_cap,
                                            std::uint64_t seed, unsigned threads) {
  const std::size_t total = sizes.size() * ranks.size() * replicates;
  std::vector<QminBenchRow> rows(total);
  parallel_for(total, threads, [&](std::size_t idx) {
    const std::size_t r = idx % replicates;
    const std::size_t rank_i = (idx / replicates) % ranks.size();
    const std::size_t size_i = idx / (replicates * ranks.size());
    const std::size_t n = sizes[size_i];
    RngStream rng = RngStream::derive(seed, kQminBench, size_i, rank_i, r);

    std::vector<double> scores(n);
    for (double& s : scores) s = rng.uniform01();
    std::optional<std::size_t> start;
    if (ranks[rank_i].rank) {
      const std::size_t k = std::min(*ranks[rank_i].rank, n);
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::nth_element(order.begin(), order.begin() + (k - 1), order.end(),
                       [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
      start = order[k - 1];
    }

    CountingOracle oracle(n, CountingOracle::Score([&scores](std::size_t x) { return scores[x]; }));
    QminConfig config;
    config.epsilon = epsilon;
    config.warm_start = start;
    config.inner_cap = inner_cap;
    const QminResult res = quantum_minimize(oracle, config, rng);
    rows[idx] = {n,
                 ranks[rank_i].label,
                 r,
                 res.cost.oracle_evaluations(),
                 res.cost.time_steps,
                 res.is_true_min};
  });
  return rows;
}

// ---------------------------------------------------------------------------
// QPMCMC on a standard normal target.

struct NormalRunResult {
  ChainTrace trace;
  double eval_fraction = 0.0;        // total target evals / (S * P)
  double selection_correct_rate = 0.0;
  double burnin_mean_evals = 0.0;    // first 5% of iterations
  double post_mean_evals = 0.0;
  EssReport ess;
};

inline NormalRunResult qpmcmc_normal(std::size_t dim, std::size_t n_proposals, std::uint64_t s,
                                     double start_coordinate, std::uint64_t seed, Mode mode,
                                     double epsilon = 0.5,
                                     std::optional<std::uint64_t> inner_cap = std::nullopt,
                                     std::uint64_t chain_tag = 0) {
  const ContinuousTarget target = standard_normal_target(dim);
  std::vector<double> init(dim, start_coordinate);
  RunConfig config;
  config.n_iterations = s;
  config.n_proposals = n_proposals;
  config.seed = mix_seed(seed, kQpmcmcNormal, chain_tag);
  config.adapt = true;
  config.epsilon = epsilon;
  config.inner_cap = inner_cap;

  NormalRunResult out;
  out.trace = run_chain(target, init, config, mode);

  const std::uint64_t split = std::max<std::uint64_t>(1, s / 20);
  std::uint64_t correct = 0;
  std::uint64_t total_evals = 0, burn_evals = 0, post_evals = 0;
  for (std::uint64_t i = 0; i < s; ++i) {
    const auto& rec = out.trace.records[i];
    correct += rec.selection_correct ? 1 : 0;
    total_evals += rec.cost.target_evals;
    (i < split ? burn_evals : post_evals) += rec.cost.target_evals;
  }
  out.eval_fraction = static_cast<double>(total_evals) /
                      (static_cast<double>(s) * static_cast<double>(n_proposals));
  out.selection_correct_rate = static_cast<double>(correct) / static_cast<double>(s);
  out.burnin_mean_evals = static_cast<double>(burn_evals) / static_cast<double>(split);
  out.post_mean_evals = static_cast<double>(post_evals) / static_cast<double>(s - split);
  out.ess = EssReport::from_chain(out.trace, s / 5);
  return out;
}

// ---------------------------------------------------------------------------
// Racing a multimodal mixture to a target effective sample size.

struct MixtureRaceResult {
  std::size_t n_proposals = 0;
  std::uint64_t iterations = 0;
  std::uint64_t target_evals = 0;
  double min_ess = 0.0;
  double speedup = 0.0;          // (S * P) / target_evals
  double efficiency_gain = 1.0;  // relative to the smallest P in the grid
};

inline MixtureRaceResult mixture_race(std::size_t n_modes, std::size_t n_proposals,
                                      double ess_target, std::uint64_t seed, Mode mode,
                                      std::uint64_t check_every = 2000,
                                      std::uint64_t max_iters = 400000, double epsilon = 0.5) {
  const GaussianMixtureTarget mixture = GaussianMixtureTarget::diagonal(n_modes);
  const ContinuousTarget target = mixture.to_target();
  const std::size_t dim = mixture.dim;
  RngStream rng = RngStream::derive(seed, kMixtureRace, n_proposals);
  AdaptationState adaptation;
  QminConfig qcfg;
  qcfg.epsilon = epsilon;

  std::vector<double> current(dim, 0.0);
  double current_lp = mode == Mode::classical ? target.log_density(current)
                                              : target.log_density_uncounted(current);
  std::vector<std::vector<double>> coords(dim);
  MixtureRaceResult out;
  out.n_proposals = n_proposals;

  for (std::uint64_t s = 1; s <= max_iters; ++s) {
    const ProposalSet props =
        centered_gaussian_proposals(current, adaptation.scale(), n_proposals, rng);
    const StepOutcome step = mode == Mode::classical
                                 ? pmcmc_step(target, props, current_lp, rng)
                                 : qpmcmc_step(target, props, qcfg, current_lp, rng);
    if (step.selected != 0) {
      const auto chosen = props.state(step.selected);
      std::copy(chosen.begin(), chosen.end(), current.begin());
      current_lp = step.record.log_density;
    }
    adapt_scale(adaptation, step.record.accepted);
    for (std::size_t d = 0; d < dim; ++d) coords[d].push_back(current[d]);

    if (s % check_every == 0 || s == max_iters) {
      double min_ess = std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < dim; ++d)
        min_ess = std::min(min_ess, effective_sample_size(coords[d]));
      if (min_ess >= ess_target || s == max_iters) {
        out.iterations = s;
        out.min_ess = min_ess;
        break;
      }
    }
  }
  out.target_evals = target.eval_count();
  out.speedup = static_cast<double>(out.iterations) * static_cast<double>(n_proposals) /
                static_cast<double>(std::max<std::uint64_t>(1, out.target_evals));
  return out;
}

inline std::vector<MixtureRaceResult> mixture_race_grid(std::size_t n_modes,
                                                        const std::vector<std::size_t>& p_list,
                                                        double ess_target, std::uint64_t seed,
                                                        Mode mode, unsigned threads,
                                                        std::uint64_t check_every = 2000,
                                                        std::uint64_t max_iters = 400000) {
  std::vector<MixtureRaceResult> results(p_list.size());
  parallel_for(p_list.size(), threads, [&](std::size_t i) {
    results[i] = mixture_race(n_modes, p_list[i], ess_target, seed, mode, check_every, max_iters);
  });
  for (auto& r : results)
    r.efficiency_gain = static_cast<double>(results.front().target_evals) /
                        static_cast<double>(std::max<std::uint64_t>(1, r.target_evals));
  return results;
}

// ---------------------------------------------------------------------------
// Ising lattice runs from the checkerboard state.

struct IsingRunResult {
  std::size_t n_proposals = 0;
  std::uint64_t replicate = 0;
  double final_log_density = 0.0;
  std::uint64_t target_evals = 0;
  ChainTrace trace;
};

inline std::vector<IsingRunResult> ising_runs(std::size_t side, double rho,
                                              const std::vector<std::size_t>& p_list,
                                              std::uint64_t s, std::uint64_t replicates,
                                              std::uint64_t seed, Mode mode, unsigned threads,
                                              bool keep_traces = false) {
  const std::size_t total = p_list.size() * replicates;
  std::vector<IsingRunResult> results(total);
  parallel_for(total, threads, [&](std::size_t idx) {
    const std::size_t p_i = idx / replicates;
    const std::uint64_t rep = idx % replicates;
    RunConfig config;
    config.n_iterations = s;
    config.n_proposals = p_list[p_i];
    config.seed = mix_seed(seed, kIsingRuns, p_i, rep);
    IsingLattice lattice = IsingLattice::checkerboard(side, side, rho);
    ChainTrace trace = run_ising_chain(lattice, config, mode);
    IsingRunResult& out = results[idx];
    out.n_proposals = p_list[p_i];
    out.replicate = rep;
    out.final_log_density = trace.log_densities.back();
    std::uint64_t evals = 0;
    for (const auto& rec : trace.records) evals += rec.cost.target_evals;
    out.target_evals = evals;
    if (keep_traces) out.trace = std::move(trace);
  });
  return results;
}

// ---------------------------------------------------------------------------
// Mixing comparison: paired classical / quantum chains on a 10-D normal.

struct MixingPairRow {
  std::size_t n_proposals = 0;
  std::uint64_t pair = 0;
  double classical_mean_ess = 0.0;
  double quantum_mean_ess = 0.0;
  double mean_rel = 0.0;
  double min_rel = 0.0;
};

inline std::vector<MixingPairRow> mixing_compare(const std::vector<std::size_t>& p_list,
                                                 std::uint64_t chains, std::uint64_t s,
                                                 std::size_t dim, std::uint64_t seed,
                                                 unsigned threads) {
  const std::size_t total = p_list.size() * chains;
  std::vector<EssReport> classical(total), quantum(total);
  parallel_for(total * 2, threads, [&](std::size_t job) {
    const bool is_quantum = job >= total;
    const std::size_t idx = job % total;
    const std::size_t p_i = idx / chains;
    const std::uint64_t chain = idx % chains;
    const ContinuousTarget target = standard_normal_target(dim);
    RunConfig config;
    config.n_iterations = s;
    config.n_proposals = p_list[p_i];
    config.seed = mix_seed(seed, kMixingCompare, is_quantum ? 2 : 1, p_i, chain);
    std::vector<double> init(dim, 0.0);
    const ChainTrace trace =
        run_chain(target, init, config, is_quantum ? Mode::quantum : Mode::classical);
    (is_quantum ? quantum : classical)[idx] = EssReport::from_chain(trace);
  });

  std::vector<MixingPairRow> rows(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const auto [mean_rel, min_rel] = relative_ess_difference(classical[idx], quantum[idx]);
    rows[idx] = {p_list[idx / chains], idx % chains,
                 classical[idx].mean_ess, quantum[idx].mean_ess, mean_rel, min_rel};
  }
  return rows;
}

}  // namespace qpmcmc::experiments
