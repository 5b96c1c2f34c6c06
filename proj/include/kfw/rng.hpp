#pragma once

// Deterministic random number generation for benchmark instances and probes.
//
// The generator algorithm is pinned so that a seed reproduces the same stream
// everywhere: std::mt19937_64 (whose output is fixed by the standard),
// uniform doubles via the top-53-bits mapping, and normals via Box-Muller.
// std::uniform_real_distribution / std::normal_distribution are deliberately
// avoided because their output sequences are implementation-defined.

#include <cmath>
#include <cstdint>
#include <random>

namespace kfw {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound). Fixed-point multiply keeps the map
  // deterministic; bias is O(bound / 2^64), irrelevant here.
  std::uint64_t uniform_int(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * bound) >> 64);
  }

  // Standard normal via Box-Muller, one cached tail value.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.28318530717958647692 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kfw
