#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace rsfr::rng {

/// Substream labels. The generator for each component of a simulation is
/// derived from one user seed and a fixed label, so regenerating e.g. the
/// noise never perturbs the code sequence drawn from the same seed.
enum class Stream : std::uint64_t { Codes = 0, Scene = 1, Noise = 2 };

/// splitmix64 finalizer over (seed, stream); decorrelates the substreams.
inline std::uint64_t mix(std::uint64_t seed, Stream stream) {
  std::uint64_t z =
      seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(stream) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// mt19937_64 consumed through raw 64-bit words only. The mappings below
/// avoid std::uniform_*_distribution so that sequences are identical
/// across standard library implementations.
class Engine {
 public:
  explicit Engine(std::uint64_t seed) : gen_(seed) {}
  Engine(std::uint64_t seed, Stream stream) : gen_(mix(seed, stream)) {}

  std::uint64_t next_word() { return gen_(); }

  /// Uniform integer in [0, m), m >= 1; rejection keeps the draw unbiased.
  int uniform_index(int m) {
    const auto um = static_cast<std::uint64_t>(m);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % um;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return static_cast<int>(x % um);
  }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Circular complex Gaussian with unit variance: E|z|^2 = 1, i.e. real
  /// and imaginary parts are N(0, 1/2). Box-Muller on raw words.
  std::complex<double> complex_gaussian() {
    double u = uniform01();
    while (u <= 0.0) u = uniform01();
    const double r = std::sqrt(-std::log(u));
    const double theta = 2.0 * pi() * uniform01();
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  static constexpr double pi() { return 3.141592653589793238462643383279502884; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rsfr::rng
