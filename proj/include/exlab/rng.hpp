#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace exlab {

/// Identifies one reproducible random stream. Identical (seed, stream) pairs
/// replay identical trajectories bit for bit.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// mt19937_64 with hand-rolled variate conversions so that results do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(RngStream s)
      : eng_(splitmix64(s.seed ^ splitmix64(s.stream + 0x632BE59BD9B4E019ull))) {}

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1).
  double u01() { return double(eng_() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-u01()) / rate; }

  bool bernoulli(double p) { return u01() < p; }

  /// Uniform in {0, ..., n-1} without modulo bias.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2 * u01() - 1;
      v = 2 * u01() - 1;
      s = u * u + v * v;
    } while (s >= 1 || s == 0);
    const double m = std::sqrt(-2 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0;
};

}  // namespace exlab
