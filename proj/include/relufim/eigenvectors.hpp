#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "relufim/features.hpp"

namespace relufim {

enum class Group { G1, G2, G3DiagTilde, G3Diag, G3OffDiag };

std::string group_name(Group g);

/// One approximate FIM eigenvector.  `i` is l for G2 and gamma for the
/// diagonal third-group vectors; (i, j) with i < j identifies the
/// off-diagonal ones.  nominal_eigenvalue is the cluster value
/// (2d+1)/4pi, 1/4 or 1/(2pi(d+2)) and is stored, not recomputed.
struct BasisVector {
  Group group = Group::G1;
  int i = 0;
  int j = 0;
  Eigen::VectorXd v;
  double nominal_eigenvalue = 0.0;

  std::string label() const;
};

double lambda_top(int d);     // (2d+1) / 4pi
double lambda_second();       // 1/4
double lambda_third(int d);   // 1 / (2pi (d+2))

/// v^(0), components ||W^(i)|| / sqrt(d).
BasisVector eig_v0(const FeatureMap& fm);

/// v^(l) = l-th row of W, 1 <= l <= d.
BasisVector eig_vl(const FeatureMap& fm, int l);

/// v^(a,b), components sqrt(d+2) W_a^(i) W_b^(i) / ||W^(i)||.  Symmetric in
/// (a, b); a zero column of W raises (never silently emits NaN).
BasisVector eig_v_ab(const FeatureMap& fm, int alpha, int beta);

/// tilde v^(gamma) = (v^(gamma,gamma) - sqrt((d+2)/d) v^(0)) / sqrt(2).
BasisVector eig_v_tilde_gamma(const FeatureMap& fm, int gamma);

/// v^(gamma) = tilde v^(gamma) - tilde v^(d) / (sqrt(d)+1), 1 <= gamma <= d-1.
BasisVector eig_v_gamma(const FeatureMap& fm, int gamma);

/// All d + d(d+1)/2 vectors of the decomposition, in canonical order:
/// v^(0), then v^(l) by l, then v^(gamma) by gamma, then v^(a,b) in
/// lexicographic (a, b) order.  Requires d >= 2.
std::vector<BasisVector> full_basis(const FeatureMap& fm);

/// Basis vectors stacked as columns (m x k), canonical order.
Eigen::MatrixXd basis_matrix(const std::vector<BasisVector>& basis);

}  // namespace relufim
