#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "relufim/eigenvectors.hpp"
#include "relufim/features.hpp"

namespace relufim {

enum class GDMode { population, empirical };

/// Gradient-descent configuration for the linear model y = X^T v* + eps.
/// In population mode n_train is the Monte Carlo sample count used to
/// estimate the quadratic's Hessian (the explicit empirical FIM); in
/// empirical mode it is the training-set size.  v_init defaults to zero.
struct GDConfig {
  int d = 0;
  int m = 0;
  std::uint64_t seed = 0;
  std::int64_t n_train = 0;
  double noise_std = 1.0;
  double step = 0.0;
  int iters = 1;
  GDMode mode = GDMode::population;
  Eigen::VectorXd target_v;  // empty: random unit vector from the counter stream
  Eigen::VectorXd v_init;    // empty: zero vector
};

/// State after t steps: loss and the per-basis-vector error projections
/// p_i = <v - v*, J v_i> / lambda_i in the J-inner product (J is the mode's
/// Hessian).  proj follows the canonical basis order.
struct TrajectoryRecord {
  int iter = 0;
  double loss = 0.0;
  Eigen::VectorXd proj;
};

struct GDResult {
  std::vector<TrajectoryRecord> trajectory;  // iters + 1 records (t = 0 .. iters)
  bool divergence_warning = false;           // population mode, step >= 2 / lambda_max_hat
  double lambda_max_hat = 0.0;               // population mode only
  Eigen::VectorXd rayleigh;                  // v_i^T J v_i / ||v_i||^2 per basis vector
  Eigen::VectorXd target_v;
};

GDResult run_gd(const GDConfig& cfg, const FeatureMap& fm, const std::vector<BasisVector>& basis);

/// The default v*: a random unit vector from the counter stream.
Eigen::VectorXd default_gd_target(int m, std::uint64_t seed);

/// Least-squares slope of log|p_i(t)| over window [t_begin, t_end); negative
/// window bounds select the default (discard the first 10% of the records).
/// Throws if fewer than 10 window points carry signal above `floor`.
double rate_fit(const std::vector<TrajectoryRecord>& traj, int basis_index, int t_begin = -1,
                int t_end = -1, double floor = 1e-280);

/// Least-squares expansion of f_v on span{f_{v_i}} under the shared-stream
/// Monte Carlo inner product.
struct Expansion {
  Eigen::VectorXd coeffs;
  double residual_norm = 0.0;
  double fv_norm_sq = 0.0;  // <f_v, f_v>
};

Expansion expand_in_basis(const FeatureMap& fm, const Eigen::VectorXd& v,
                          const std::vector<BasisVector>& basis, std::int64_t n_samples,
                          std::uint64_t seed);

}  // namespace relufim
