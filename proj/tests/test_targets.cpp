#include "qpmcmc/targets.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "support.hpp"

using namespace qpmcmc;

namespace {

// 1-D Simpson quadrature of the proposal-mean integral; with an isotropic
// kernel the joint proposal density factorizes over dimensions, so this is
// an independent route to q(theta_p, Theta_{-p}).
double simpson_proposal_factor(const std::vector<double>& coords, std::size_t current,
                               double sigma) {
  const double lo = *std::min_element(coords.begin(), coords.end()) - 10.0 * sigma;
  const double hi = *std::max_element(coords.begin(), coords.end()) + 10.0 * sigma;
  const int steps = 8000;  // even
  const double h = (hi - lo) / steps;
  auto integrand = [&](double b) {
    double expo = -(b - coords[current]) * (b - coords[current]);
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (j == current) continue;
      expo -= (coords[j] - b) * (coords[j] - b);
    }
    return std::exp(expo / (2.0 * sigma * sigma));
  };
  double acc = integrand(lo) + integrand(hi);
  for (int i = 1; i < steps; ++i) acc += integrand(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  const double norm = std::pow(2.0 * M_PI * sigma * sigma, -0.5 * coords.size());
  return acc * h / 3.0 * norm;
}

}  // namespace

TEST(ContinuousTarget, CountsEvaluations) {
  const ContinuousTarget t = standard_normal_target(3);
  const std::vector<double> x = {1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(t.log_density(x), -7.0);
  EXPECT_EQ(t.eval_count(), 1u);
  t.log_density_uncounted(x);
  EXPECT_EQ(t.eval_count(), 1u);
  t.charge_evals(5);
  EXPECT_EQ(t.eval_count(), 6u);
}

TEST(GaussianMixture, MatchesBruteForceLogSumExp) {
  const GaussianMixtureTarget mix = GaussianMixtureTarget::diagonal(100);
  const ContinuousTarget t = mix.to_target();
  RngStream rng(139);
  for (int r = 0; r < 50; ++r) {
    const std::vector<double> x = {rng.uniform01() * 1000.0, rng.uniform01() * 1000.0};
    long double direct = 0.0L;
    long double mx = -1e300L;
    std::vector<long double> terms(100);
    for (int k = 0; k < 100; ++k) {
      const long double dx = x[0] - 10.0L * k;
      const long double dy = x[1] - 10.0L * k;
      terms[k] = -(dx * dx + dy * dy) / 2.0L;
      mx = std::max(mx, terms[k]);
    }
    for (int k = 0; k < 100; ++k) direct += expl(terms[k] - mx);
    const double expected = static_cast<double>(mx + logl(direct));
    EXPECT_NEAR(t.log_density_uncounted(x), expected, 1e-9 * std::max(1.0, std::abs(expected)));
  }
}

TEST(CenteredGaussianProposals, DegenerateScaleCollapsesToCurrent) {
  RngStream rng(149);
  const std::vector<double> current = {1.0, -2.0, 0.5};
  const ProposalSet set = centered_gaussian_proposals(current, 1e-12, 5, rng);
  ASSERT_EQ(set.count(), 6u);
  for (std::size_t p = 0; p <= 5; ++p)
    for (std::size_t d = 0; d < 3; ++d)
      EXPECT_NEAR(set.state(p)[d], current[d], 1e-6);
}

TEST(CenteredGaussianProposals, TwoStageVarianceIsDoubled) {
  RngStream rng(151);
  const std::vector<double> current = {0.0};
  std::vector<double> diffs;
  for (int r = 0; r < 50000; ++r) {
    const ProposalSet set = centered_gaussian_proposals(current, 1.0, 2, rng);
    diffs.push_back(set.state(1)[0]);
    diffs.push_back(set.state(2)[0]);
  }
  EXPECT_NEAR(test_support::mean(diffs), 0.0, 0.05);
  EXPECT_NEAR(test_support::variance(diffs), 2.0, 0.06);
}

TEST(CenteredGaussianProposals, JointDensityIsExchangeable) {
  // quadrature oracle: all P+1 "who is current" densities agree
  RngStream rng(157);
  for (int trial = 0; trial < 5; ++trial) {
    const double sigma = 0.5 + rng.uniform01();
    const std::vector<double> current = {rng.normal(), rng.normal()};
    const ProposalSet set = centered_gaussian_proposals(current, sigma, 3, rng);
    std::vector<double> q(4);
    for (std::size_t p = 0; p < 4; ++p) {
      double val = 1.0;
      for (std::size_t d = 0; d < 2; ++d) {
        std::vector<double> coords(4);
        for (std::size_t j = 0; j < 4; ++j) coords[j] = set.state(j)[d];
        val *= simpson_proposal_factor(coords, p, sigma);
      }
      q[p] = val;
    }
    const double lo = *std::min_element(q.begin(), q.end());
    const double hi = *std::max_element(q.begin(), q.end());
    EXPECT_LT((hi - lo) / hi, 1e-9);
  }
}

TEST(SingleFlipProposals, ExhaustiveNeighborhood) {
  const IsingLattice lattice = IsingLattice::all_up(2, 2, 1.0);
  RngStream rng(163);
  const SingleFlipProposalSet set = single_flip_proposals(lattice, 4, rng);
  std::set<std::uint32_t> sites(set.sites.begin(), set.sites.end());
  EXPECT_EQ(sites.size(), 4u);
  EXPECT_EQ(*sites.begin(), 0u);
  EXPECT_EQ(*sites.rbegin(), 3u);
}

TEST(SingleFlipProposals, DistinctSitesAndErrors) {
  const IsingLattice lattice = IsingLattice::all_up(2, 2, 1.0);
  RngStream rng(167);
  for (int r = 0; r < 50; ++r) {
    const SingleFlipProposalSet set = single_flip_proposals(lattice, 2, rng);
    EXPECT_NE(set.sites[0], set.sites[1]);
  }
  EXPECT_THROW(single_flip_proposals(lattice, 5, rng), std::invalid_argument);
  EXPECT_THROW(single_flip_proposals(lattice, 0, rng), std::invalid_argument);
}

TEST(SingleFlipProposals, SitesAreUniform) {
  const IsingLattice lattice = IsingLattice::all_up(3, 3, 1.0);
  RngStream rng(173);
  std::vector<std::uint64_t> counts(9, 0);
  const int n = 90000;
  for (int i = 0; i < n; ++i) ++counts[single_flip_proposals(lattice, 1, rng).sites[0]];
  const std::vector<double> probs(9, 1.0 / 9.0);
  EXPECT_LT(test_support::chi_square_statistic(counts, probs),
            test_support::chi_square_critical_001(8));
}

TEST(IsingLattice, LogDensityKnownValues) {
  const IsingLattice up = IsingLattice::all_up(2, 2, 1.0);
  EXPECT_DOUBLE_EQ(up.log_density(), 4.0);
  const IsingLattice board = IsingLattice::checkerboard(2, 2, 1.0);
  EXPECT_DOUBLE_EQ(board.log_density(), -4.0);
  // checkerboard minimizes: every edge discordant
  const IsingLattice big = IsingLattice::checkerboard(8, 8, 1.0);
  EXPECT_DOUBLE_EQ(big.log_density(), -static_cast<double>(big.n_edges()));
}

TEST(IsingLattice, FlipDeltaKnownValues) {
  const IsingLattice up = IsingLattice::all_up(5, 5, 1.0);
  EXPECT_DOUBLE_EQ(up.flip_delta(12), -8.0);  // interior: 4 neighbors
  EXPECT_DOUBLE_EQ(up.flip_delta(0), -4.0);   // corner: 2 neighbors
  EXPECT_DOUBLE_EQ(up.flip_delta(2), -6.0);   // edge: 3 neighbors
  EXPECT_THROW(up.flip_delta(25), std::invalid_argument);
}

TEST(IsingLattice, DeltaConsistentWithFullEvaluation) {
  IsingLattice lattice = IsingLattice::all_up(8, 8, 1.3);
  RngStream rng(179);
  for (int i = 0; i < 200; ++i)
    if (rng.uniform01() < 0.5) lattice.flip(static_cast<std::size_t>(rng.below(64)));
  double running = lattice.log_density();
  for (int i = 0; i < 500; ++i) {
    const auto site = static_cast<std::size_t>(rng.below(64));
    const double delta = lattice.flip_delta(site);
    lattice.flip(site);
    running += delta;
    ASSERT_NEAR(running, lattice.log_density(), 1e-9);
  }
}

TEST(IsingLattice, FlipIsAnInvolution) {
  IsingLattice lattice = IsingLattice::checkerboard(4, 4, 1.0);
  const std::string before = lattice.to_text();
  lattice.flip(7);
  lattice.flip(7);
  EXPECT_EQ(lattice.to_text(), before);
}

TEST(IsingLattice, TextRoundTrip) {
  const IsingLattice lattice = IsingLattice::checkerboard(3, 2, 2.0);
  const IsingLattice back = IsingLattice::from_text(lattice.to_text(), 2.0);
  EXPECT_EQ(back.to_text(), lattice.to_text());
  EXPECT_DOUBLE_EQ(back.log_density(), lattice.log_density());
  EXPECT_THROW(IsingLattice::from_text("1 2\n", 1.0), std::invalid_argument);
}

TEST(AdaptScale, UpdateArithmetic) {
  AdaptationState state;
  adapt_scale(state, true);  // eta_1 = 1
  EXPECT_DOUBLE_EQ(state.log_scale, 0.5);
  EXPECT_EQ(state.iteration, 1u);
  AdaptationState fresh;
  adapt_scale(fresh, false);
  EXPECT_DOUBLE_EQ(fresh.log_scale, -0.5);
}

TEST(AdaptScale, AlternatingPairsStayNearStart) {
  // each accept/reject pair nets 0.5 (eta_t - eta_{t+1}); the cumulative
  // drift is bounded by half the first step and per-pair drift vanishes
  AdaptationState state;
  double before_last_pair = 0.0;
  for (int i = 0; i < 100; ++i) {
    before_last_pair = state.log_scale;
    adapt_scale(state, true);
    adapt_scale(state, false);
  }
  EXPECT_LT(std::abs(state.log_scale), 0.5);
  EXPECT_LT(std::abs(state.log_scale - before_last_pair), 0.002);
}

TEST(IsingLattice, CheckerboardGoldenText) {
  const IsingLattice lattice = IsingLattice::checkerboard(3, 2, 1.0);
  EXPECT_EQ(lattice.to_text(), "1 -1 1\n-1 1 -1\n");
}
