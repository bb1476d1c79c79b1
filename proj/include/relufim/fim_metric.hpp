#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "relufim/eigenvectors.hpp"
#include "relufim/features.hpp"

namespace relufim {

/// Default cap for the explicit (dense m x m) FIM mode.  Above it only the
/// matrix-free inner-product estimator is available.
inline constexpr int kExplicitFimCap = 2048;

struct InnerProductEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of the Fisher inner product
/// <f_u, f_v> = E_{x~N(0,I_d)}[(X^T u)(X^T v)].  Matrix-free; works at any m.
InnerProductEstimate inner_product_mc(const FeatureMap& fm, const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& v, std::int64_t n_samples,
                                      std::uint64_t seed);

/// Explicit empirical FIM (1/n) sum X(x_k) X(x_k)^T, exactly symmetric.
/// Refuses m above `cap` with a message pointing at the matrix-free mode.
Eigen::MatrixXd empirical_fim_explicit(const FeatureMap& fm, std::int64_t n_samples,
                                       std::uint64_t seed, int cap = kExplicitFimCap);

/// Pairwise Fisher inner products of a set of basis vectors, all estimated
/// on one shared input stream (one pass over x; every f_{v_i}(x) accumulated
/// together).  std_error holds the per-entry Monte Carlo standard errors.
struct GramSummary {
  Eigen::MatrixXd gram;
  Eigen::MatrixXd std_error;
  Eigen::VectorXd nominal;
  double max_offdiag_abs = 0.0;
  double max_diag_reldev = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

GramSummary gram_summary(const FeatureMap& fm, const std::vector<BasisVector>& basis,
                         std::int64_t n_samples, std::uint64_t seed);

/// Eigenvalue clusters: indices into {lambda_top, 1/4, lambda_third, 0}.
enum ClusterId : int { kClusterTop = 0, kClusterSecond = 1, kClusterThird = 2, kClusterZero = 3 };

struct SpectrumReport {
  Eigen::VectorXd eigenvalues;      // descending
  std::vector<int> cluster;         // nearest-nominal assignment per eigenvalue
  int count_top_band = 0;           // counts within +-band of each nominal
  int count_second_band = 0;
  int count_third_band = 0;
  double band = 0.2;
  double residual_opnorm = 0.0;     // ||Jhat - sum lambda_nominal v v^T||_2
  double min_eigenvalue = 0.0;
  int d = 0, m = 0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Empirical spectrum of the explicit FIM against the nominal rank-one
/// decomposition over full_basis(fm).  Explicit-mode constraints apply.
SpectrumReport decomposition_residual(const FeatureMap& fm, std::int64_t n_samples,
                                      std::uint64_t seed, int cap = kExplicitFimCap,
                                      double band = 0.2);

}  // namespace relufim
