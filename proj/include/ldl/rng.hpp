#ifndef LDL_RNG_HPP_
#define LDL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace ldl {

// Every random draw in the library goes through this file.
//
// The generator is SplitMix64 viewed as a counter-based generator: draw k
// (k = 1, 2, ...) of the stream keyed by `seed` is
//
//     mix64(seed + k * 0x9E3779B97F4A7C15)
//
// where mix64 is the SplitMix64 finalizer. Streams are split by hashing
// integer keys into a new seed with derive_seed(), so a trial's draws depend
// only on (seed, size, trial) and never on scheduling.

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ mix64(v + kGoldenGamma));
}

inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(seed + kGoldenGamma);
  for (auto k : keys) h = hash_combine(h, k);
  return h;
}

// Maps 64 random bits to [0, 1) with 53 bits of resolution.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  double uniform() { return to_unit(next()); }

  // Multiply-shift reduction to [0, n); bias is below 2^-32 for n < 2^32.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; one normal per call, the partner variate is discarded so the
  // stream position is a function of the call count only.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Number of failures before the first success, success probability 1 - q.
  std::uint64_t geometric(double q) {
    std::uint64_t k = 0;
    while (uniform() < q) ++k;
    return k;
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace ldl

#endif  // LDL_RNG_HPP_
