// Command-line harness: reproduces the desk-scale experiments and writes
// machine-readable CSV. Every subcommand is deterministic given its flags and
// the seed (fallback: QPMCMC_SEED environment variable).

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpmcmc/csv.hpp"
#include "qpmcmc/experiments.hpp"
#include "qpmcmc/version.hpp"

namespace {

using namespace qpmcmc;
namespace xp = qpmcmc::experiments;

constexpr std::uint64_t kDefaultSeed = 20240601;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QPMCMC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("QPMCMC_SEED", "not a valid 64-bit seed");
    }
  }
  return kDefaultSeed;
}

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 0;
  bool full_scale = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const std::string& default_out) {
  opts.out = default_out;
  cmd->add_option("--seed", opts.seed, "master 64-bit seed");
  cmd->add_option("--out", opts.out, "output CSV path ('-' for stdout)");
  cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)");
  cmd->add_flag("--full-scale", opts.full_scale,
                "use the full published experiment parameters instead of desk-scale defaults");
}

// Applies a paper-scale value unless the flag was given explicitly.
template <class T>
void full_scale_default(CLI::App* cmd, const std::string& flag, T& value, T paper_value) {
  if (cmd->count(flag) == 0) value = std::move(paper_value);
}

int run_grover_curves(const CommonOpts& common, std::size_t n, std::vector<std::size_t> m_list,
                      std::uint64_t max_iters) {
  const auto rows = xp::grover_curves(n, m_list, max_iters);
  CsvWriter csv(common.out, "grover-curves");
  csv.header({"n", "m", "iterations", "success_prob"});
  for (const auto& r : rows) csv.row(r.n, r.m, r.iterations, r.success);
  return 0;
}

int run_search_bench(const CommonOpts& common, std::vector<std::string> algorithms,
                     std::size_t n, std::vector<std::size_t> m_list, std::uint64_t replicates,
                     double delta, std::optional<double> w_opt) {
  CsvWriter csv(common.out, "search-bench");
  csv.header({"algorithm", "n", "m", "replicate", "found", "grover_calls", "verify_calls",
              "time_steps", "target_evals"});
  const double w = w_opt ? *w_opt : 1.0 / static_cast<double>(n);
  for (std::size_t m : m_list) {
    for (const auto& algo : algorithms) {
      std::vector<xp::SearchBenchRow> rows;
      if (algo == "qesa") {
        rows = xp::qesa_bench(n, m, replicates, common.seed, common.threads);
      } else if (algo == "fpqs") {
        rows = xp::fpqs_bench(n, m, delta, w, replicates, common.seed, common.threads);
      } else {
        throw CLI::ValidationError("--algorithms", "unknown algorithm: " + algo);
      }
      for (const auto& r : rows)
        csv.row(r.algorithm, r.n, r.m, r.replicate, r.found, r.cost.grover_calls,
                r.cost.verify_calls, r.cost.time_steps, r.cost.target_evals);
    }
  }
  return 0;
}

int run_qmin_bench(const CommonOpts& common, std::vector<std::size_t> sizes,
                   std::vector<std::string> ranks, std::uint64_t replicates, double epsilon) {
  std::vector<xp::RankSpec> specs;
  for (const auto& r : ranks) {
    if (r == "random") {
      specs.push_back({r, std::nullopt});
    } else if (r == "half") {
      specs.push_back({r, 0});  // resolved per size below
    } else {
      specs.push_back({r, std::stoull(r)});
    }
  }
  CsvWriter csv(common.out, "qmin-bench");
  csv.header({"n", "start_rank", "replicate", "oracle_evals", "time_steps", "success"});
  for (std::size_t size_i = 0; size_i < sizes.size(); ++size_i) {
    std::vector<xp::RankSpec> resolved = specs;
    for (auto& s : resolved)
      if (s.label == "half") s.rank = std::max<std::size_t>(2, sizes[size_i] / 2);
    const auto rows = xp::qmin_bench({sizes[size_i]}, resolved, replicates, epsilon,
                                      std::nullopt, mix_seed(common.seed, size_i), common.threads);
    for (const auto& r : rows)
      csv.row(r.n, r.start_rank, r.replicate, r.oracle_evals, r.time_steps, r.success);
  }
  return 0;
}

// Per-dimensionality trace path: "out.csv" with dims {3, 10} writes
// "out.d3.csv" and "out.d10.csv" (a single dim writes to out directly).
std::string trace_path_for_dim(const std::string& out, std::size_t dim, std::size_t n_dims) {
  if (out == "-" || n_dims == 1) return out;
  const auto dot = out.rfind('.');
  if (dot == std::string::npos || out.find('/', dot) != std::string::npos)
    return out + ".d" + std::to_string(dim);
  return out.substr(0, dot) + ".d" + std::to_string(dim) + out.substr(dot);
}

int run_qpmcmc_normal(const CommonOpts& common, std::vector<std::size_t> dims, std::size_t P,
                      std::uint64_t S, double start) {
  std::string summary_path = common.out == "-" ? "-" : common.out + ".summary";
  CsvWriter summary(summary_path, "qpmcmc-normal-summary");
  summary.header({"dim", "P", "S", "eval_fraction", "selection_correct_rate",
                  "burnin_mean_evals", "post_mean_evals", "mean_ess", "min_ess",
                  "qq_max_central_dev"});
  for (std::size_t d_i = 0; d_i < dims.size(); ++d_i) {
    const std::size_t dim = dims[d_i];
    const auto res =
        xp::qpmcmc_normal(dim, P, S, start, common.seed, Mode::quantum, 0.5, std::nullopt, d_i);

    CsvWriter csv(trace_path_for_dim(common.out, dim, dims.size()), "qpmcmc-normal");
    std::string line;
    {
      std::vector<std::string_view> cols = {"iter"};
      std::vector<std::string> state_names(dim);
      for (std::size_t d = 0; d < dim; ++d) state_names[d] = "x" + std::to_string(d);
      for (const auto& s : state_names) cols.push_back(s);
      for (const char* c : {"accepted", "selection_correct", "grover_calls", "verify_calls",
                            "target_evals", "log_density"})
        cols.push_back(c);
      bool first = true;
      for (auto c : cols) {
        if (!first) line += ',';
        line += c;
        first = false;
      }
      csv.raw_line(line);
    }
    for (std::uint64_t i = 0; i < res.trace.length(); ++i) {
      const auto& rec = res.trace.records[i];
      line.clear();
      line += std::to_string(i);
      for (double v : res.trace.state(i)) {
        line += ',';
        line += format_csv_double(v);
      }
      line += rec.accepted ? ",1," : ",0,";
      line += rec.selection_correct ? '1' : '0';
      line += ',';
      line += std::to_string(rec.cost.grover_calls);
      line += ',';
      line += std::to_string(rec.cost.verify_calls);
      line += ',';
      line += std::to_string(rec.cost.target_evals);
      line += ',';
      line += format_csv_double(rec.log_density);
      csv.raw_line(line);
    }
    // pooled post-burn-in QQ deviation over the central 98% quantiles
    const std::uint64_t burn = S / 5;
    std::vector<double> pooled;
    pooled.reserve((S - burn) * dim);
    for (std::uint64_t i = burn; i < S; ++i) {
      const auto st = res.trace.state(i);
      pooled.insert(pooled.end(), st.begin(), st.end());
    }
    double max_dev = std::numeric_limits<double>::quiet_NaN();
    if (pooled.size() >= 100) {
      max_dev = 0.0;
      for (const auto& [theo, emp] : qq_points(pooled))
        if (std::abs(theo) <= normal_quantile(0.99))
          max_dev = std::max(max_dev, std::abs(emp - theo));
    }
    summary.row(dim, P, S, res.eval_fraction, res.selection_correct_rate, res.burnin_mean_evals,
                res.post_mean_evals, res.ess.mean_ess, res.ess.min_ess, max_dev);
  }
  return 0;
}

int run_qpmcmc_mixture(const CommonOpts& common, std::size_t n_modes,
                       std::vector<std::size_t> p_list, double ess_target,
                       std::uint64_t max_iters) {
  const auto results = xp::mixture_race_grid(n_modes, p_list, ess_target, common.seed,
                                              Mode::quantum, common.threads, 2000, max_iters);
  CsvWriter csv(common.out, "qpmcmc-mixture");
  csv.header({"P", "iterations", "target_evals", "min_ess", "speedup", "efficiency_gain"});
  for (const auto& r : results)
    csv.row(r.n_proposals, r.iterations, r.target_evals, r.min_ess, r.speedup, r.efficiency_gain);
  return 0;
}

int run_qpmcmc_ising(const CommonOpts& common, std::size_t side, double rho,
                     std::vector<std::size_t> p_list, std::uint64_t S, std::uint64_t replicates) {
  const auto results = xp::ising_runs(side, rho, p_list, S, replicates, common.seed,
                                       Mode::quantum, common.threads, /*keep_traces=*/true);
  CsvWriter csv(common.out, "qpmcmc-ising");
  csv.header({"P", "replicate", "iter", "log_density", "accepted", "selection_correct",
              "grover_calls", "verify_calls", "target_evals"});
  for (const auto& run : results) {
    for (std::uint64_t i = 0; i < run.trace.length(); ++i) {
      const auto& rec = run.trace.records[i];
      csv.row(run.n_proposals, run.replicate, i, run.trace.log_densities[i], rec.accepted,
              rec.selection_correct, rec.cost.grover_calls, rec.cost.verify_calls,
              rec.cost.target_evals);
    }
  }
  std::string summary_path = common.out == "-" ? "-" : common.out + ".summary";
  CsvWriter summary(summary_path, "qpmcmc-ising-summary");
  summary.header({"P", "replicate", "final_log_density", "target_evals"});
  for (const auto& run : results)
    summary.row(run.n_proposals, run.replicate, run.final_log_density, run.target_evals);
  return 0;
}

int run_mixing_compare(const CommonOpts& common, std::vector<std::size_t> p_list,
                       std::uint64_t chains, std::uint64_t S, std::size_t dim) {
  const auto rows = xp::mixing_compare(p_list, chains, S, dim, common.seed, common.threads);
  CsvWriter csv(common.out, "mixing-compare");
  csv.header({"P", "pair", "classical_mean_ess", "quantum_mean_ess", "mean_rel_diff",
              "min_rel_diff"});
  for (const auto& r : rows)
    csv.row(r.n_proposals, r.pair, r.classical_mean_ess, r.quantum_mean_ess, r.mean_rel,
            r.min_rel);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("qpmcmc-sim v") + QPMCMC_SIM_VERSION +
               " - classical simulator of quantum search, quantum minimization, and QPMCMC"};
  app.require_subcommand(1);

  try {
    CommonOpts c_grover, c_search, c_qmin, c_normal, c_mixture, c_ising, c_mixing;

    // grover-curves
    auto* grover = app.add_subcommand("grover-curves", "exact success curves vs iteration count");
    std::size_t g_n = 16384;
    std::vector<std::size_t> g_m = {1, 4, 16, 64, 256};
    std::uint64_t g_iters = 130;
    grover->add_option("--n", g_n, "search set size");
    grover->add_option("--m", g_m, "solution counts");
    grover->add_option("--max-iters", g_iters, "iterations per curve");
    add_common(grover, c_grover, "grover_curves.csv");

    // search-bench
    auto* search = app.add_subcommand("search-bench", "QESA / FPQS cost benchmark");
    std::vector<std::string> s_algos = {"qesa", "fpqs"};
    std::size_t s_n = 4096;
    std::vector<std::size_t> s_m = {1, 2, 4};
    std::uint64_t s_reps = 500;
    double s_delta = 0.1;
    double s_w = 0.0;
    search->add_option("--algorithms", s_algos, "subset of {qesa, fpqs}");
    search->add_option("--n", s_n, "search set size");
    search->add_option("--m", s_m, "solution counts");
    search->add_option("--replicates", s_reps, "replicates per grid point");
    search->add_option("--delta", s_delta, "FPQS error tolerance (success >= 1 - delta^2)");
    search->add_option("--w", s_w, "FPQS lower bound on M/N (0 = use 1/N)");
    add_common(search, c_search, "search_bench.csv");

    // qmin-bench
    auto* qmin = app.add_subcommand("qmin-bench", "quantum minimization benchmark");
    std::vector<std::size_t> q_sizes = {256, 512, 1024, 2048, 4096};
    std::vector<std::string> q_ranks = {"1", "2", "8", "half", "random"};
    std::uint64_t q_reps = 500;
    double q_eps = 0.5;
    qmin->add_option("--n", q_sizes, "search set sizes");
    qmin->add_option("--ranks", q_ranks, "start ranks (integers, 'half', 'random')");
    qmin->add_option("--replicates", q_reps, "replicates per grid point");
    qmin->add_option("--epsilon", q_eps, "outer budget tolerance");
    add_common(qmin, c_qmin, "qmin_bench.csv");

    // qpmcmc-normal
    auto* normal = app.add_subcommand("qpmcmc-normal", "QPMCMC on standard normal targets");
    std::vector<std::size_t> n_dims = {1, 3, 10, 30, 100};
    std::size_t n_P = 512;
    std::uint64_t n_S = 2000;
    double n_start = 100.0;
    normal->add_option("--dims", n_dims, "target dimensionalities");
    normal->add_option("--proposals,-P", n_P, "proposals per iteration");
    normal->add_option("--iters,-S", n_S, "chain length");
    normal->add_option("--start", n_start, "starting coordinate (every dimension)");
    add_common(normal, c_normal, "qpmcmc_normal.csv");

    // qpmcmc-mixture
    auto* mixture = app.add_subcommand("qpmcmc-mixture", "race a 2-D Gaussian mixture to an ESS");
    std::size_t x_modes = 100;
    std::vector<std::size_t> x_p = {256, 1024};
    double x_ess = 100.0;
    std::uint64_t x_max = 400000;
    mixture->add_option("--modes", x_modes, "number of mixture modes");
    mixture->add_option("--proposals,-P", x_p, "proposal counts");
    mixture->add_option("--ess-target", x_ess, "minimum-dimension ESS to reach");
    mixture->add_option("--max-iters", x_max, "hard iteration cap per race");
    add_common(mixture, c_mixture, "qpmcmc_mixture.csv");

    // qpmcmc-ising
    auto* ising = app.add_subcommand("qpmcmc-ising", "QPMCMC on a 2-D Ising lattice");
    std::size_t i_side = 64;
    double i_rho = 1.0;
    std::vector<std::size_t> i_p = {4, 8, 16, 32, 64, 128, 256};
    std::uint64_t i_S = 2000;
    std::uint64_t i_reps = 10;
    ising->add_option("--side", i_side, "lattice side length");
    ising->add_option("--rho", i_rho, "interaction strength");
    ising->add_option("--proposals,-P", i_p, "proposal counts");
    ising->add_option("--iters,-S", i_S, "chain length");
    ising->add_option("--replicates", i_reps, "replicates per proposal count");
    add_common(ising, c_ising, "qpmcmc_ising.csv");

    // mixing-compare
    auto* mixing = app.add_subcommand("mixing-compare", "paired ESS comparison, pMCMC vs QPMCMC");
    std::vector<std::size_t> mix_p = {16, 64, 256};
    std::uint64_t mix_chains = 20;
    std::uint64_t mix_S = 10000;
    std::size_t mix_dim = 10;
    mixing->add_option("--proposals,-P", mix_p, "proposal counts");
    mixing->add_option("--chains", mix_chains, "chains per arm");
    mixing->add_option("--iters,-S", mix_S, "chain length");
    mixing->add_option("--dims", mix_dim, "target dimension");
    add_common(mixing, c_mixing, "mixing_compare.csv");

    const std::uint64_t fallback = default_seed();
    for (CommonOpts* c : {&c_grover, &c_search, &c_qmin, &c_normal, &c_mixture, &c_ising, &c_mixing})
      c->seed = fallback;

    app.parse(argc, argv);

    // published experiment scales, applied where the user did not override
    if (c_normal.full_scale) {
      full_scale_default(normal, "--proposals", n_P, std::size_t{2000});
      full_scale_default(normal, "--iters", n_S, std::uint64_t{2000});
    }
    if (c_mixture.full_scale) {
      full_scale_default(mixture, "--modes", x_modes, std::size_t{1000});
      full_scale_default(mixture, "--proposals", x_p, {std::size_t{1000}, 5000, 10000});
      full_scale_default(mixture, "--max-iters", x_max, std::uint64_t{2000000});
    }
    if (c_ising.full_scale) {
      full_scale_default(ising, "--side", i_side, std::size_t{500});
      full_scale_default(ising, "--proposals", i_p,
                         {std::size_t{4}, 8, 16, 32, 64, 128, 256, 512, 1024, 2048});
    }
    if (c_mixing.full_scale) {
      full_scale_default(mixing, "--chains", mix_chains, std::uint64_t{100});
      full_scale_default(mixing, "--proposals", mix_p, {std::size_t{16}, 64, 256, 1024});
    }

    if (grover->parsed()) return run_grover_curves(c_grover, g_n, g_m, g_iters);
    if (search->parsed())
      return run_search_bench(c_search, s_algos, s_n, s_m, s_reps, s_delta,
                              s_w > 0.0 ? std::optional<double>(s_w) : std::nullopt);
    if (qmin->parsed()) return run_qmin_bench(c_qmin, q_sizes, q_ranks, q_reps, q_eps);
    if (normal->parsed()) return run_qpmcmc_normal(c_normal, n_dims, n_P, n_S, n_start);
    if (mixture->parsed()) return run_qpmcmc_mixture(c_mixture, x_modes, x_p, x_ess, x_max);
    if (ising->parsed()) return run_qpmcmc_ising(c_ising, i_side, i_rho, i_p, i_S, i_reps);
    if (mixing->parsed()) return run_mixing_compare(c_mixing, mix_p, mix_chains, mix_S, mix_dim);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
