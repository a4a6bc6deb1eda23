#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace rismm {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a decorrelated child seed from a master seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0xA24BAED4963EE407ULL * (stream + 1));
  splitmix64(s);
  splitmix64(s);
  return splitmix64(s);
}

// Seeded random stream with a fixed raw-draw budget per call: uniform()
// consumes one engine output, normal() and cnormal() consume two. Keeping the
// consumption deterministic makes interleaved sampling reproducible no matter
// which code path asks for the values.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in {0, ..., n-1}.
  int uniform_int(int n) {
    int v = static_cast<int>(uniform() * n);
    return v < n ? v : n - 1;
  }

  /// Standard normal via Box-Muller; always two raw draws.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * M_PI * u2);
  }

  /// Circularly-symmetric complex normal with unit total variance.
  std::complex<double> cnormal() {
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-std::log1p(-u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }

  /// Child stream for a stream index; depends only on the construction seed,
  /// not on how many draws this stream has produced.
  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace rismm
