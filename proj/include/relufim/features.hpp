#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "relufim/rng.hpp"

namespace relufim {

/// Frozen random first layer of the two-layer ReLU model y = X(x)^T v + eps,
/// with X(x) = relu(x^T W).  W is d x m with IID N(0, 1/m) entries, stored
/// column-major so each hidden unit's weight vector W^(i) is contiguous.
/// Entry (i, j) is a pure function of (seed, i, j); regeneration with the
/// same (d, m, seed) is bit-identical regardless of how generation is split.
struct FeatureMap {
  int d = 0;
  int m = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd W;  // d x m
};

/// Draws W with entries N(0, 1/m).  Normals come from Box-Muller on the
/// counter stream (Stream::weights); entry (i, j) sits at counter j*d + i.
FeatureMap generate_weights(int d, int m, std::uint64_t seed);

/// X(x) = relu(W^T x), the m-dimensional activated covariate vector.
Eigen::VectorXd activate(const FeatureMap& fm, const Eigen::VectorXd& x);

/// Row-batched activation: rows of xs are inputs, rows of the result are X(x).
Eigen::MatrixXd activate_rows(const FeatureMap& fm, const Eigen::MatrixXd& xs);

/// f_v(x) = X(x)^T v.
double eval_basis(const FeatureMap& fm, const Eigen::VectorXd& v, const Eigen::VectorXd& x);

}  // namespace relufim
