#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "relufim/rng.hpp"

namespace relufim::mc {

// All Monte Carlo loops consume samples in fixed-size chunks; sample k's
// coordinates sit at counters k*d .. k*d+d-1 of the input stream, so results
// are identical however the chunk work is scheduled.
inline constexpr std::int64_t kChunk = 4096;

/// Rows count x d of N(0, I_d) inputs for samples [first, first + count).
inline Eigen::MatrixXd gaussian_rows(const rng::CounterStream& s, std::int64_t first,
                                     std::int64_t count, int d) {
  Eigen::MatrixXd x(count, d);
  std::vector<double> buf(static_cast<std::size_t>(count) * d);
  s.normal_fill(buf.data(), static_cast<std::uint64_t>(first) * d,
                static_cast<std::uint64_t>(count) * d);
  for (std::int64_t k = 0; k < count; ++k)
    for (int j = 0; j < d; ++j) x(k, j) = buf[static_cast<std::size_t>(k) * d + j];
  return x;
}

/// Pairwise (binary-counter) reduction over chunk partials.  Combination
/// order is a pure function of the number of chunks added, independent of
/// any parallel schedule that produced them.
template <class T>
class PairwiseReducer {
 public:
  void add(T value) {
    std::size_t level = 0;
    while (level < slots_.size() && slots_[level]) {
      value += *slots_[level];
      slots_[level].reset();
      ++level;
    }
    if (level == slots_.size())
      slots_.push_back(std::move(value));
    else
      slots_[level] = std::move(value);
  }

  /// Sum of everything added so far; empty reducer returns `zero`.
  T total(T zero) const {
    T acc = std::move(zero);
    for (const auto& s : slots_)
      if (s) acc += *s;
    return acc;
  }

 private:
  std::vector<std::optional<T>> slots_;
};

}  // namespace relufim::mc
