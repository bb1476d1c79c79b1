#include <doctest.h>

#include <cmath>
#include <vector>

#include "relufim/rng.hpp"

using relufim::rng::CounterStream;
using relufim::rng::Stream;

TEST_CASE("values are pure functions of (seed, stream, index)") {
  const CounterStream a(42, Stream::weights), b(42, Stream::weights);
  for (std::uint64_t i : {0ull, 1ull, 2ull, 17ull, 1000000ull}) {
    CHECK(a.uniform(i) == b.uniform(i));
    CHECK(a.normal(i) == b.normal(i));
  }
}

TEST_CASE("bulk fill matches element-wise access at any offset") {
  const CounterStream s(7, Stream::mc_inputs);
  std::vector<double> bulk(37);
  s.normal_fill(bulk.data(), 11, 37);  // odd offset exercises the pair split
  for (std::uint64_t i = 0; i < 37; ++i) CHECK(bulk[i] == s.normal(11 + i));
}

TEST_CASE("streams with the same seed are distinct") {
  const CounterStream a(3, Stream::weights), b(3, Stream::mc_inputs);
  int same = 0;
  for (std::uint64_t i = 0; i < 100; ++i) same += (a.bits(i) == b.bits(i));
  CHECK(same == 0);
}

TEST_CASE("normal moments at CLT scale") {
  const CounterStream s(123, Stream::weights);
  const std::size_t n = 1u << 20;
  std::vector<double> z(n);
  s.normal_fill(z.data(), 0, n);
  double sum = 0, sum2 = 0, sum4 = 0;
  int tail = 0;
  for (double v : z) {
    sum += v;
    sum2 += v * v;
    sum4 += v * v * v * v;
    tail += std::abs(v) > 1.959963984540054;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(double(n)));            // 5 sigma of CLT bound
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / double(n)));
  CHECK(std::abs(sum4 / n - 3.0) < 5.0 * std::sqrt(96.0 / double(n)));
  const double p = double(tail) / n;  // two-sided 5% tail of the standard normal
  CHECK(std::abs(p - 0.05) < 5.0 * std::sqrt(0.05 * 0.95 / double(n)));
}

TEST_CASE("uniform is in (0, 1]") {
  const CounterStream s(9, Stream::weights);
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = s.uniform(i);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

// Frozen draws pin the generator choice (SplitMix64 counters + Box-Muller);
// any change to the sampling recipe is a breaking change to every seed-keyed
// result in the project and must show up here.
TEST_CASE("frozen regression vector") {
  const CounterStream s(2024, Stream::weights);
  CHECK(s.normal(0) == doctest::Approx(-0.64535262396589532).epsilon(1e-15));
  CHECK(s.normal(1) == doctest::Approx(-0.9646879976227235).epsilon(1e-15));
  CHECK(s.normal(2) == doctest::Approx(-0.82543928223611429).epsilon(1e-15));
  CHECK(s.normal(5) == doctest::Approx(1.501087650775079).epsilon(1e-15));
}
