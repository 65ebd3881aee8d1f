#include "qpmcmc/diagnostics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qpmcmc/rng.hpp"

using namespace qpmcmc;

TEST(EffectiveSampleSize, WhiteNoiseIsNearChainLength) {
  RngStream rng(2003);
  const int n = 10000;
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  const double ess = effective_sample_size(x);
  EXPECT_GE(ess, 0.8 * n);
  EXPECT_LE(ess, 1.2 * n);
}

TEST(EffectiveSampleSize, MatchesAr1ClosedForm) {
  // integrated autocorrelation of AR(1): (1+phi)/(1-phi)
  for (double phi : {0.0, 0.5, -0.5, 0.9}) {
    RngStream rng(2011);
    const int n = 100000;
    std::vector<double> x(n);
    double prev = 0.0;
    const double innov = std::sqrt(1.0 - phi * phi);
    for (int i = 0; i < n; ++i) {
      prev = phi * prev + innov * rng.normal();
      x[i] = prev;
    }
    const double expected = n * (1.0 - phi) / (1.0 + phi);
    const double ess = effective_sample_size(x);
    EXPECT_NEAR(ess, expected, 0.25 * expected) << "phi=" << phi;
  }
}

TEST(EffectiveSampleSize, ConstantSeriesIsFlagged) {
  const std::vector<double> x(500, 3.25);
  const EssDetail detail = effective_sample_size_detail(x);
  EXPECT_TRUE(detail.constant_series);
  EXPECT_DOUBLE_EQ(detail.ess, 500.0);
  EXPECT_THROW(effective_sample_size(std::vector<double>(5, 1.0)), std::invalid_argument);
}

TEST(EssReport, PerDimensionClampAndStats) {
  ChainTrace trace;
  trace.dim = 2;
  RngStream rng(2017);
  const int n = 2000;
  trace.records.resize(n);
  trace.states.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    trace.states[2 * i] = rng.normal();
    trace.states[2 * i + 1] = rng.normal();
  }
  const EssReport report = EssReport::from_chain(trace);
  ASSERT_EQ(report.per_dimension.size(), 2u);
  for (double e : report.per_dimension) {
    EXPECT_GT(e, 0.0);
    EXPECT_LE(e, static_cast<double>(n));
  }
  EXPECT_LE(report.min_ess, report.mean_ess);
}

TEST(RelativeEssDifference, Arithmetic) {
  EssReport a, b;
  a.mean_ess = 200.0;
  a.min_ess = 100.0;
  b.mean_ess = 190.0;
  b.min_ess = 100.0;
  const auto [mean_rel, min_rel] = relative_ess_difference(a, b);
  EXPECT_DOUBLE_EQ(mean_rel, 0.05);
  EXPECT_DOUBLE_EQ(min_rel, 0.0);
  const auto [zero_mean, zero_min] = relative_ess_difference(a, a);
  EXPECT_DOUBLE_EQ(zero_mean, 0.0);
  EXPECT_DOUBLE_EQ(zero_min, 0.0);
  EssReport bad;
  bad.mean_ess = 0.0;
  bad.min_ess = 1.0;
  EXPECT_THROW(relative_ess_difference(bad, b), std::invalid_argument);
}

TEST(NormalQuantile, InvertsTheNormalCdf) {
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  for (double p : {0.001, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999}) {
    EXPECT_NEAR(cdf(normal_quantile(p)), p, 1e-12) << "p=" << p;
  }
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_DOUBLE_EQ(normal_quantile(0.5), 0.0);
  EXPECT_THROW(normal_quantile(0.0), std::invalid_argument);
  EXPECT_THROW(normal_quantile(1.0), std::invalid_argument);
}

TEST(QqPoints, ExactQuantileGridSitsOnIdentity) {
  const int n = 1000;
  std::vector<double> samples(n);
  for (int i = 0; i < n; ++i) samples[i] = normal_quantile((i + 0.5) / n);
  const auto points = qq_points(samples);
  for (const auto& [theo, emp] : points) EXPECT_NEAR(theo, emp, 1e-9);
}

TEST(QqPoints, LargeNormalSampleHugsTheIdentityCentrally) {
  RngStream rng(2027);
  const int n = 100000;
  std::vector<double> samples(n);
  for (double& v : samples) v = rng.normal();
  const auto points = qq_points(samples);
  const double z99 = normal_quantile(0.99);
  double max_dev = 0.0;
  for (const auto& [theo, emp] : points)
    if (std::abs(theo) <= z99) max_dev = std::max(max_dev, std::abs(emp - theo));
  EXPECT_LT(max_dev, 0.05);
}

TEST(QqPoints, ShiftedSampleShowsConstantOffset) {
  RngStream rng(2029);
  const int n = 100000;
  std::vector<double> samples(n);
  for (double& v : samples) v = rng.normal() + 1.0;
  const auto points = qq_points(samples);
  const double z95 = normal_quantile(0.95);
  for (const auto& [theo, emp] : points) {
    if (std::abs(theo) <= z95) {
      EXPECT_NEAR(emp - theo, 1.0, 0.05);
    }
  }
  EXPECT_THROW(qq_points(std::vector<double>(50, 0.0)), std::invalid_argument);
}
