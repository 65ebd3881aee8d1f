#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpmcmc/rng.hpp"

namespace qpmcmc {

// A log-density over R^D with an evaluation counter. The counted path models
// the classical cost; log_density_uncounted plus charge_evals let the quantum
// sampler bill the oracle-accounted amount instead.
class ContinuousTarget {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  ContinuousTarget(std::size_t dim, Fn log_density)
      : dim_(dim), fn_(std::move(log_density)) {
    if (dim_ == 0) throw std::invalid_argument("ContinuousTarget: dim must be >= 1");
  }

  std::size_t dim() const { return dim_; }

  double log_density(std::span<const double> x) const {
    ++evals_;
    return fn_(x);
  }

  double log_density_uncounted(std::span<const double> x) const { return fn_(x); }

  void charge_evals(std::uint64_t n) const { evals_ += n; }

  std::uint64_t eval_count() const { return evals_; }
  void reset_eval_count() { evals_ = 0; }

 private:
  std::size_t dim_;
  Fn fn_;
  mutable std::uint64_t evals_ = 0;
};

inline ContinuousTarget standard_normal_target(std::size_t dim) {
  return ContinuousTarget(dim, [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return -0.5 * s;
  });
}

// Equal-weight mixture of isotropic Gaussians.
struct GaussianMixtureTarget {
  std::size_t dim;
  double sd;
  std::vector<double> means;  // n_modes x dim, row-major

  std::size_t n_modes() const { return means.size() / dim; }

  // Modes at 10k * (1,...,1), the layout used in the mixture experiments.
  static GaussianMixtureTarget diagonal(std::size_t n_modes, std::size_t dim = 2,
                                        double spacing = 10.0, double sd = 1.0) {
    GaussianMixtureTarget t;
    t.dim = dim;
    t.sd = sd;
    t.means.resize(n_modes * dim);
    for (std::size_t k = 0; k < n_modes; ++k)
      for (std::size_t d = 0; d < dim; ++d) t.means[k * dim + d] = spacing * static_cast<double>(k);
    return t;
  }

  ContinuousTarget to_target() const {
    const auto self = *this;
    return ContinuousTarget(dim, [self](std::span<const double> x) {
      const std::size_t k_modes = self.n_modes();
      const double inv2s2 = 1.0 / (2.0 * self.sd * self.sd);
      double best = -std::numeric_limits<double>::infinity();
      thread_local std::vector<double> vals;
      vals.resize(k_modes);
      for (std::size_t k = 0; k < k_modes; ++k) {
        double d2 = 0.0;
        for (std::size_t d = 0; d < self.dim; ++d) {
          const double diff = x[d] - self.means[k * self.dim + d];
          d2 += diff * diff;
        }
        vals[k] = -d2 * inv2s2;
        if (vals[k] > best) best = vals[k];
      }
      double sum = 0.0;
      for (std::size_t k = 0; k < k_modes; ++k) {
        // terms below best - 45 vanish in double accumulation
        if (vals[k] > best - 45.0) sum += std::exp(vals[k] - best);
      }
      return best + std::log(sum);
    });
  }
};

// Two-dimensional lattice of +-1 spins with ferromagnetic interaction rho and
// free (non-periodic) nearest-neighbor edges.
class IsingLattice {
 public:
  IsingLattice(std::size_t width, std::size_t height, double rho)
      : width_(width), height_(height), rho_(rho), spins_(width * height, 1) {
    if (width_ == 0 || height_ == 0) throw std::invalid_argument("IsingLattice: empty lattice");
    if (!(rho_ > 0.0)) throw std::invalid_argument("IsingLattice: rho must be > 0");
  }

  static IsingLattice all_up(std::size_t w, std::size_t h, double rho) {
    return IsingLattice(w, h, rho);
  }

  static IsingLattice checkerboard(std::size_t w, std::size_t h, double rho) {
    IsingLattice l(w, h, rho);
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c)
        l.spins_[r * w + c] = ((r + c) % 2 == 0) ? 1 : -1;
    return l;
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t n_sites() const { return spins_.size(); }
  std::size_t n_edges() const { return width_ * (height_ - 1) + height_ * (width_ - 1); }
  double rho() const { return rho_; }

  int spin(std::size_t site) const { return spins_[site]; }
  int spin(std::size_t row, std::size_t col) const { return spins_[row * width_ + col]; }

  void flip(std::size_t site) {
    check_site(site);
    spins_[site] = static_cast<std::int8_t>(-spins_[site]);
  }

  // rho * sum over lattice edges of theta_d theta_d'.
  double log_density() const {
    long long s = 0;
    for (std::size_t r = 0; r < height_; ++r) {
      for (std::size_t c = 0; c < width_; ++c) {
        const int v = spins_[r * width_ + c];
        if (c + 1 < width_) s += v * spins_[r * width_ + c + 1];
        if (r + 1 < height_) s += v * spins_[(r + 1) * width_ + c];
      }
    }
    return rho_ * static_cast<double>(s);
  }

  // Change in log-density if `site` were flipped; the lattice is not touched.
  double flip_delta(std::size_t site) const {
    check_site(site);
    const std::size_t r = site / width_;
    const std::size_t c = site % width_;
    int nb = 0;
    if (r > 0) nb += spins_[site - width_];
    if (r + 1 < height_) nb += spins_[site + width_];
    if (c > 0) nb += spins_[site - 1];
    if (c + 1 < width_) nb += spins_[site + 1];
    return -2.0 * rho_ * static_cast<double>(spins_[site]) * static_cast<double>(nb);
  }

  // Plain-text grid of +-1 rows, for golden tests.
  std::string to_text() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < height_; ++r) {
      for (std::size_t c = 0; c < width_; ++c) {
        if (c) os << ' ';
        os << static_cast<int>(spins_[r * width_ + c]);
      }
      os << '\n';
    }
    return os.str();
  }

  static IsingLattice from_text(const std::string& text, double rho) {
    std::vector<std::vector<int>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::vector<int> row;
      int v;
      while (ls >> v) row.push_back(v);
      if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("IsingLattice::from_text: empty grid");
    IsingLattice l(rows[0].size(), rows.size(), rho);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != l.width_) throw std::invalid_argument("ragged grid");
      for (std::size_t c = 0; c < l.width_; ++c) {
        if (rows[r][c] != 1 && rows[r][c] != -1) throw std::invalid_argument("spin not +-1");
        l.spins_[r * l.width_ + c] = static_cast<std::int8_t>(rows[r][c]);
      }
    }
    return l;
  }

 private:
  void check_site(std::size_t site) const {
    if (site >= spins_.size()) throw std::invalid_argument("IsingLattice: site out of range");
  }

  std::size_t width_, height_;
  double rho_;
  std::vector<std::int8_t> spins_;
};

inline double ising_log_density(const IsingLattice& l) { return l.log_density(); }
inline double ising_flip_delta(const IsingLattice& l, std::size_t site) {
  return l.flip_delta(site);
}

// Current state plus P proposals, dense rows; row 0 is the current state.
struct ProposalSet {
  std::size_t dim = 0;
  std::vector<double> data;  // (P+1) x dim

  std::size_t count() const { return dim == 0 ? 0 : data.size() / dim; }
  std::size_t n_proposals() const { return count() - 1; }

  std::span<const double> state(std::size_t p) const {
    return {data.data() + p * dim, dim};
  }
  std::span<double> mutable_state(std::size_t p) { return {data.data() + p * dim, dim}; }
};

// Centered Gaussian proposal: one auxiliary mean draw theta_bar ~ N(current,
// scale^2 I), then P i.i.d. proposals ~ N(theta_bar, scale^2 I). This makes
// the joint proposal density symmetric across all P+1 states.
inline ProposalSet centered_gaussian_proposals(std::span<const double> current, double scale,
                                               std::size_t n_proposals, RngStream& rng) {
  if (n_proposals == 0) throw std::invalid_argument("centered_gaussian_proposals: P must be >= 1");
  if (!(scale > 0.0)) throw std::invalid_argument("centered_gaussian_proposals: scale must be > 0");
  const std::size_t dim = current.size();
  ProposalSet set;
  set.dim = dim;
  set.data.resize((n_proposals + 1) * dim);
  std::copy(current.begin(), current.end(), set.data.begin());
  std::vector<double> center(dim);
  for (std::size_t d = 0; d < dim; ++d) center[d] = current[d] + scale * rng.normal();
  for (std::size_t p = 1; p <= n_proposals; ++p) {
    auto row = set.mutable_state(p);
    for (std::size_t d = 0; d < dim; ++d) row[d] = center[d] + scale * rng.normal();
  }
  return set;
}

// P distinct flip sites drawn uniformly without replacement; proposal p is
// the current configuration with sites[p-1] negated, index 0 the unmodified
// configuration.
struct SingleFlipProposalSet {
  std::vector<std::uint32_t> sites;  // size P
  std::size_t count() const { return sites.size() + 1; }
};

inline SingleFlipProposalSet single_flip_proposals(const IsingLattice& lattice,
                                                   std::size_t n_proposals, RngStream& rng) {
  const std::size_t d = lattice.n_sites();
  if (n_proposals == 0 || n_proposals > d)
    throw std::invalid_argument("single_flip_proposals: need 1 <= P <= site count");
  std::vector<std::uint32_t> ids(d);
  std::iota(ids.begin(), ids.end(), 0u);
  SingleFlipProposalSet out;
  out.sites.resize(n_proposals);
  for (std::size_t k = 0; k < n_proposals; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.below(d - k));
    std::swap(ids[k], ids[j]);
    out.sites[k] = ids[k];
  }
  return out;
}

// Robbins-Monro controller on log proposal scale, step size t^{-0.6},
// targeting a fixed acceptance rate.
struct AdaptationState {
  double log_scale = 0.0;
  double target_accept = 0.5;
  std::uint64_t iteration = 0;

  double scale() const { return std::exp(log_scale); }
};

inline void adapt_scale(AdaptationState& state, bool accepted) {
  const double t = static_cast<double>(state.iteration + 1);
  const double eta = std::pow(t, -0.6);
  state.log_scale += eta * ((accepted ? 1.0 : 0.0) - state.target_accept);
  ++state.iteration;
}

}  // namespace qpmcmc
