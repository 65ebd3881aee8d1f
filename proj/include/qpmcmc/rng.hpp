#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qpmcmc {

// SplitMix64 finalizer; used to whiten seeds and combine stream tags.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t h) { return splitmix64(h); }

template <class... Tags>
std::uint64_t mix_seed(std::uint64_t h, std::uint64_t tag, Tags... rest) {
  return mix_seed(splitmix64(h + splitmix64(tag)), rest...);
}

// A reproducible random stream. Independent streams are derived from a single
// master seed plus integer tags, e.g. derive(seed, experiment_id, replicate).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  template <class... Tags>
  static RngStream derive(std::uint64_t seed, Tags... tags) {
    return RngStream(mix_seed(seed, static_cast<std::uint64_t>(tags)...));
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on the open interval (0,1); never returns an exact 0 or 1.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in {0, ..., n-1}, rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double a = 2.0 * M_PI * uniform01();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Standard Gumbel(0,1) through the inverse CDF G(z) = exp(-exp(-z)).
  double gumbel() { return -std::log(-std::log(uniform01())); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qpmcmc
