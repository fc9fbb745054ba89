// Seeded random streams. Every sampler in the library takes an explicit Rng so
// that a (params, seed) pair fully determines the output; concurrent trials
// each own an independent stream derived via derive_seed.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace risopt {

// splitmix64 finalizer; full-avalanche 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// FNV-1a over a string, used to turn experiment ids into stream tags.
constexpr std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Independent per-trial seed: seed' = hash(master_seed, stream, trial_index).
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream,
                                    std::uint64_t index) {
  std::uint64_t h = mix64(master_seed + 0x9E3779B97F4A7C15ULL);
  h = mix64(h ^ (stream + 0x9E3779B97F4A7C15ULL));
  h = mix64(h ^ (index + 0x9E3779B97F4A7C15ULL));
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // U[lo, hi)
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  // N(0, 1)
  double standard_normal() { return normal_(engine_); }

  // CN(0, 1): real and imaginary parts are independent N(0, 1/2).
  std::complex<double> complex_normal() {
    static constexpr double kInvSqrt2 = 0.7071067811865475244;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

  // uniform over {0, 1, ..., n-1}
  int uniform_int(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(engine_);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace risopt
