#ifndef FFF_RNG_HPP
#define FFF_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace fff {

/// SplitMix64 finalizer; used for seed derivation and grid seeding.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combine of a seed with one more word.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ (mix64(b) + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2)));
}

/// Seed for replicate r of grid cell c under a master seed. A pure function of
/// the three arguments, so adding axes to a grid never reshuffles the seeds of
/// existing (cell, replicate) pairs.
constexpr std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t cell,
                                       std::uint64_t replicate) noexcept {
  return mix_seed(mix_seed(master, cell), replicate);
}

/// Deterministic random stream: mt19937_64 keyed by (seed, stream_index) with
/// hand-rolled uniform / exponential / normal transforms, so the same pair
/// reproduces the same draw sequence bit-for-bit on any platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0)
      : seed_(seed),
        stream_index_(stream_index),
        eng_(mix_seed(seed, stream_index)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Exponential with the given rate. Consumes one word.
  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  /// Standard normal via Box-Muller. Consumes two words per draw (no caching,
  /// keeping the word count per call fixed).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  Eigen::VectorXd normal_vector(Eigen::Index d) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = normal();
    return v;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 eng_;
};

}  // namespace fff

#endif  // FFF_RNG_HPP
