#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace test_support {

// Upper 0.1% critical values of the chi-square distribution, df = 1..15.
inline double chi_square_critical_001(std::size_t df) {
  static const double table[] = {10.828, 13.816, 16.266, 18.467, 20.515,
                                 22.458, 24.322, 26.124, 27.877, 29.588,
                                 31.264, 32.909, 34.528, 36.123, 37.697};
  if (df < 1 || df > 15) throw std::invalid_argument("chi_square_critical_001: df 1..15");
  return table[df - 1];
}

// Goodness-of-fit statistic against known cell probabilities.
inline double chi_square_statistic(std::span<const std::uint64_t> observed,
                                   std::span<const double> probs) {
  const std::uint64_t n = std::accumulate(observed.begin(), observed.end(), std::uint64_t{0});
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = static_cast<double>(n) * probs[i];
    const double diff = static_cast<double>(observed[i]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

// Two-sample homogeneity statistic over a shared set of cells; df = k - 1.
inline double chi_square_two_sample(std::span<const std::uint64_t> a,
                                    std::span<const std::uint64_t> b) {
  const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::uint64_t{0}));
  const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
  double stat = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double pooled = (static_cast<double>(a[i]) + static_cast<double>(b[i])) / (na + nb);
    if (pooled == 0.0) continue;
    const double ea = na * pooled, eb = nb * pooled;
    const double da = static_cast<double>(a[i]) - ea;
    const double db = static_cast<double>(b[i]) - eb;
    stat += da * da / ea + db * db / eb;
  }
  return stat;
}

inline double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(std::span<const double> v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace test_support
