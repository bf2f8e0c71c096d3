#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dprl {

// Deterministic sampler used everywhere a seed is recorded. mt19937_64 is
// bit-exact across platforms; the transforms below avoid the
// implementation-defined std::*_distribution adaptors so identical seeds give
// identical streams on any standard library.
class NoiseSampler {
 public:
  explicit NoiseSampler(std::uint64_t seed) : gen_(seed) {}

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (cosine branch only).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Zero-mean Laplace with scale b via inverse CDF.
  double laplace(double b) {
    const double u = uniform() - 0.5;
    return u < 0 ? b * std::log1p(2.0 * u) : -b * std::log1p(-2.0 * u);
  }

  // Uniform integer in [0, n). Modulo bias is below 2^-53 for the sizes used
  // here (shuffles of at most a few million rows).
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 gen_;
};

// Mixes a user seed with a stream tag so derived streams are decorrelated
// (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dprl
