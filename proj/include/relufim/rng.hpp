#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace relufim::rng {

// Domain tags keep the weight matrix, Monte Carlo inputs, noise draws, etc.
// on disjoint streams even when the user passes the same seed everywhere.
enum class Stream : std::uint64_t {
  weights = 1,
  mc_inputs = 2,
  gd_noise = 3,
  gd_target = 4,
  experiment_inputs = 5,
  bootstrap = 6,
};

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.  Applied to (key + i * kGolden) this is exactly the
// SplitMix64 sequence read at position i, so every draw is a pure function
// of (seed, stream, i) and any sub-range can be generated independently.
inline std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based generator: stateless, seekable, order-independent.
// Normal variates come from Box-Muller applied to consecutive uniform pairs,
// so normal(2p) and normal(2p+1) share the pair (uniform(2p), uniform(2p+1)).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, Stream stream)
      : key_(mix64(mix64(seed) ^ (static_cast<std::uint64_t>(stream) * 0xD6E8FEB86659FD93ull))) {}

  std::uint64_t bits(std::uint64_t i) const { return mix64(key_ + i * kGolden); }

  // Uniform on (0, 1]; never returns 0 so log() below is safe.
  double uniform(std::uint64_t i) const {
    return static_cast<double>((bits(i) >> 11) + 1) * 0x1.0p-53;
  }

  double normal(std::uint64_t i) const {
    const std::uint64_t p = i >> 1;
    const double r = std::sqrt(-2.0 * std::log(uniform(2 * p)));
    const double a = 2.0 * std::numbers::pi * uniform(2 * p + 1);
    return (i & 1) ? r * std::sin(a) : r * std::cos(a);
  }

  // Fills out[0..n) with normal(first), ..., normal(first+n-1), computing each
  // Box-Muller pair once.
  void normal_fill(double* out, std::uint64_t first, std::uint64_t n) const {
    std::uint64_t i = first;
    const std::uint64_t end = first + n;
    if (i < end && (i & 1)) {
      out[i - first] = normal(i);
      ++i;
    }
    for (; i + 1 < end; i += 2) {
      const double u1 = uniform(i);
      const double u2 = uniform(i + 1);
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double a = 2.0 * std::numbers::pi * u2;
      out[i - first] = r * std::cos(a);
      out[i + 1 - first] = r * std::sin(a);
    }
    if (i < end) out[i - first] = normal(i);
  }

 private:
  std::uint64_t key_;
};

}  // namespace relufim::rng
