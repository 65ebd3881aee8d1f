#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

#include "qpmcmc/rng.hpp"

namespace qpmcmc {

inline double sample_gumbel(RngStream& rng) { return rng.gumbel(); }

// Gumbel-max trick: argmax_p (lambda*_p + z_p) with fresh Gumbel noise is an
// exact sample from the normalized distribution. -inf entries are legal and
// never selected; ties break toward the smaller index.
inline std::size_t gumbel_max_select(std::span<const double> unnormalized_log_probs,
                                     RngStream& rng) {
  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  bool any_finite = false;
  for (std::size_t p = 0; p < unnormalized_log_probs.size(); ++p) {
    const double lp = unnormalized_log_probs[p];
    if (lp == -std::numeric_limits<double>::infinity()) {
      rng.gumbel();  // keep the per-entry draw count fixed
      continue;
    }
    any_finite = true;
    const double val = lp + rng.gumbel();
    if (val > best_val) {
      best_val = val;
      best = p;
    }
  }
  if (!any_finite)
    throw std::invalid_argument("gumbel_max_select: all entries are -inf");
  return best;
}

// Inverse-CDF sample over nonnegative weights.
inline std::size_t exact_discrete_sample(std::span<const double> weights, RngStream& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("exact_discrete_sample: weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0)
    throw std::invalid_argument("exact_discrete_sample: all weights are zero");
  const double u = rng.uniform01() * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
    cum += weights[i];
    if (u <= cum && weights[i] > 0.0) return i;
  }
  return last_positive;
}

}  // namespace qpmcmc
