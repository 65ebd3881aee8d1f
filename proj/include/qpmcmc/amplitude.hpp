#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "qpmcmc/rng.hpp"

namespace qpmcmc {

// Membership indicator over the search set {0..N-1}.
struct MarkSet {
  std::vector<std::uint8_t> marked;
  std::size_t count = 0;

  static MarkSet none(std::size_t n) {
    MarkSet m;
    m.marked.assign(n, 0);
    return m;
  }

  static MarkSet of(std::size_t n, std::initializer_list<std::size_t> idx) {
    MarkSet m = none(n);
    for (std::size_t i : idx) m.set(i);
    return m;
  }

  template <class Pred>
  static MarkSet from_predicate(std::size_t n, Pred&& pred) {
    MarkSet m = none(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (pred(i)) m.set(i);
    }
    return m;
  }

  void set(std::size_t i) {
    if (i >= marked.size()) throw std::out_of_range("MarkSet::set: index out of range");
    if (!marked[i]) {
      marked[i] = 1;
      ++count;
    }
  }

  bool is_marked(std::size_t i) const { return marked[i] != 0; }
  std::size_t size() const { return marked.size(); }
};

// Classical simulation of an N-dimensional quantum state: the full vector of
// complex probability amplitudes. N is not required to be a power of two.
class AmplitudeRegister {
 public:
  explicit AmplitudeRegister(std::size_t n_items) {
    if (n_items == 0) throw std::invalid_argument("AmplitudeRegister: n_items must be >= 1");
    amps_.assign(n_items, std::complex<double>(1.0 / std::sqrt(static_cast<double>(n_items)), 0.0));
  }

  std::size_t size() const { return amps_.size(); }
  std::complex<double> amp(std::size_t x) const { return amps_[x]; }
  std::span<const std::complex<double>> amps() const { return amps_; }
  std::span<std::complex<double>> mutable_amps() { return amps_; }

  double probability(std::size_t x) const { return std::norm(amps_[x]); }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  double marked_probability(const MarkSet& marks) const {
    double s = 0.0;
    for (std::size_t x = 0; x < amps_.size(); ++x) {
      if (marks.is_marked(x)) s += std::norm(amps_[x]);
    }
    return s;
  }

 private:
  std::vector<std::complex<double>> amps_;
};

inline AmplitudeRegister uniform_register(std::size_t n_items) {
  return AmplitudeRegister(n_items);
}

namespace detail {
inline void check_dims(const AmplitudeRegister& reg, const MarkSet& marks) {
  if (reg.size() != marks.size())
    throw std::invalid_argument("register and mark set sizes differ");
}
}  // namespace detail

// One Grover iteration: flip the sign of every marked amplitude, then reflect
// all amplitudes about their mean.
inline void grover_iterate(AmplitudeRegister& reg, const MarkSet& marks) {
  detail::check_dims(reg, marks);
  auto amps = reg.mutable_amps();
  const std::size_t n = amps.size();
  std::complex<double> sum(0.0, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    if (marks.is_marked(x)) amps[x] = -amps[x];
    sum += amps[x];
  }
  const std::complex<double> two_mean = 2.0 * sum / static_cast<double>(n);
  for (std::size_t x = 0; x < n; ++x) amps[x] = two_mean - amps[x];
}

// Generalized Grover iteration with phases (alpha, beta): marked amplitudes
// pick up the phase e^{i beta}, then the phased reflection about the uniform
// state, (1 - e^{-i alpha})|h><h| - I, is applied. Reduces to grover_iterate
// at alpha = beta = pi.
inline void generalized_grover_iterate(AmplitudeRegister& reg, const MarkSet& marks,
                                       double alpha, double beta) {
  detail::check_dims(reg, marks);
  auto amps = reg.mutable_amps();
  const std::size_t n = amps.size();
  const std::complex<double> phase_beta = std::polar(1.0, beta);
  std::complex<double> sum(0.0, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    if (marks.is_marked(x)) amps[x] *= phase_beta;
    sum += amps[x];
  }
  const std::complex<double> coef =
      (1.0 - std::polar(1.0, -alpha)) * sum / static_cast<double>(n);
  for (std::size_t x = 0; x < n; ++x) amps[x] = coef - amps[x];
}

// Measurement in the computational basis: returns x with probability
// |amps[x]|^2. The register is not collapsed; callers discard it.
inline std::size_t measure(const AmplitudeRegister& reg, RngStream& rng) {
  const auto amps = reg.amps();
  const double u = rng.uniform01() * reg.norm_sq();
  double cum = 0.0;
  for (std::size_t x = 0; x < amps.size(); ++x) {
    cum += std::norm(amps[x]);
    if (u <= cum) return x;
  }
  return amps.size() - 1;
}

}  // namespace qpmcmc
