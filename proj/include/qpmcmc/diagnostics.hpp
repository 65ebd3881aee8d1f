#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qpmcmc/mcmc.hpp"

namespace qpmcmc {

struct EssDetail {
  double ess = 0.0;
  bool constant_series = false;
  std::size_t pairs_used = 0;
};

// ESS = S / (1 + 2 sum_k rho_k) with Geyer's initial monotone positive
// sequence truncation of the autocorrelations. Constant series are defined to
// have zero autocorrelation (ESS = S) and flagged.
inline EssDetail effective_sample_size_detail(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 10) throw std::invalid_argument("effective_sample_size: need at least 10 points");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = series[i] - mean;
  double var = 0.0;
  for (double v : x) var += v * v;
  var /= static_cast<double>(n);
  if (var == 0.0) return {static_cast<double>(n), true, 0};

  auto rho = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) s += x[i] * x[i + k];
    return s / (static_cast<double>(n) * var);
  };

  // Gamma_m = rho_{2m} + rho_{2m+1}: keep while positive, then force the
  // sequence nonincreasing.
  std::vector<double> pair_sums;
  for (std::size_t m = 0;; ++m) {
    const std::size_t k0 = 2 * m;
    if (k0 >= n - 1) break;
    const double g = rho(k0) + (k0 + 1 < n ? rho(k0 + 1) : 0.0);
    if (g <= 0.0) break;
    pair_sums.push_back(g);
  }
  for (std::size_t i = 1; i < pair_sums.size(); ++i)
    pair_sums[i] = std::min(pair_sums[i], pair_sums[i - 1]);
  double tau = -1.0;
  for (double g : pair_sums) tau += 2.0 * g;
  tau = std::max(tau, 1.0 / static_cast<double>(n));
  return {static_cast<double>(n) / tau, false, pair_sums.size()};
}

inline double effective_sample_size(std::span<const double> series) {
  return effective_sample_size_detail(series).ess;
}

struct EssReport {
  std::vector<double> per_dimension;
  double mean_ess = 0.0;
  double min_ess = 0.0;

  // Per-dimension ESS over a continuous chain, after burn-in removal.
  // Values are clamped to the chain length.
  static EssReport from_chain(const ChainTrace& trace, std::size_t burn_in = 0) {
    if (trace.dim == 0) throw std::invalid_argument("EssReport: continuous chains only");
    const std::size_t total = trace.length();
    if (burn_in >= total) throw std::invalid_argument("EssReport: burn-in swallows the chain");
    const std::size_t n = total - burn_in;
    EssReport report;
    report.per_dimension.resize(trace.dim);
    std::vector<double> series(n);
    for (std::size_t d = 0; d < trace.dim; ++d) {
      for (std::size_t i = 0; i < n; ++i) series[i] = trace.states[(burn_in + i) * trace.dim + d];
      report.per_dimension[d] = std::min(effective_sample_size(series), static_cast<double>(n));
    }
    double sum = 0.0;
    double mn = report.per_dimension[0];
    for (double e : report.per_dimension) {
      sum += e;
      mn = std::min(mn, e);
    }
    report.mean_ess = sum / static_cast<double>(trace.dim);
    report.min_ess = mn;
    return report;
  }
};

// (|mean_a - mean_b| / mean_a, |min_a - min_b| / min_a) with `a` the
// classical baseline.
inline std::pair<double, double> relative_ess_difference(const EssReport& baseline,
                                                         const EssReport& other) {
  if (baseline.mean_ess <= 0.0 || baseline.min_ess <= 0.0)
    throw std::invalid_argument("relative_ess_difference: zero baseline");
  return {std::abs(baseline.mean_ess - other.mean_ess) / baseline.mean_ess,
          std::abs(baseline.min_ess - other.min_ess) / baseline.min_ess};
}

// Wichura's AS 241 (PPND16) inverse of the standard normal CDF.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

// Paired (theoretical, empirical) quantiles at plotting positions
// (i - 0.5) / n against the standard normal reference.
inline std::vector<std::pair<double, double>> qq_points(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 100) throw std::invalid_argument("qq_points: need at least 100 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    points[i] = {normal_quantile(pos), sorted[i]};
  }
  return points;
}

}  // namespace qpmcmc
