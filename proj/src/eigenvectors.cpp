#include "relufim/eigenvectors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relufim {

namespace {

Eigen::VectorXd column_norms_checked(const FeatureMap& fm) {
  Eigen::VectorXd n = fm.W.colwise().norm();
  if ((n.array() == 0.0).any())
    throw std::domain_error("degenerate zero column in W");
  return n;
}

}  // namespace

std::string group_name(Group g) {
  switch (g) {
    case Group::G1: return "G1";
    case Group::G2: return "G2";
    case Group::G3DiagTilde: return "G3diag_tilde";
    case Group::G3Diag: return "G3diag";
    case Group::G3OffDiag: return "G3offdiag";
  }
  return "?";
}

std::string BasisVector::label() const {
  switch (group) {
    case Group::G1: return "v0";
    case Group::G2: return "v_l" + std::to_string(i);
    case Group::G3DiagTilde: return "vtilde_g" + std::to_string(i);
    case Group::G3Diag: return "v_g" + std::to_string(i);
    case Group::G3OffDiag:
      return "v_ab" + std::to_string(i) + "_" + std::to_string(j);
  }
  return "?";
}

double lambda_top(int d) { return (2.0 * d + 1.0) / (4.0 * std::numbers::pi); }
double lambda_second() { return 0.25; }
double lambda_third(int d) { return 1.0 / (2.0 * std::numbers::pi * (d + 2.0)); }

BasisVector eig_v0(const FeatureMap& fm) {
  BasisVector b;
  b.group = Group::G1;
  b.v = fm.W.colwise().norm() / std::sqrt(static_cast<double>(fm.d));
  b.nominal_eigenvalue = lambda_top(fm.d);
  return b;
}

BasisVector eig_vl(const FeatureMap& fm, int l) {
  if (l < 1 || l > fm.d) throw std::out_of_range("eig_vl: l out of range");
  BasisVector b;
  b.group = Group::G2;
  b.i = l;
  b.v = fm.W.row(l - 1).transpose();
  b.nominal_eigenvalue = lambda_second();
  return b;
}

BasisVector eig_v_ab(const FeatureMap& fm, int alpha, int beta) {
  if (alpha < 1 || beta < 1 || alpha > fm.d || beta > fm.d)
    throw std::out_of_range("eig_v_ab: index out of range");
  if (alpha > beta) std::swap(alpha, beta);
  const Eigen::VectorXd norms = column_norms_checked(fm);
  BasisVector b;
  b.group = Group::G3OffDiag;
  b.i = alpha;
  b.j = beta;
  b.v = std::sqrt(fm.d + 2.0) *
        (fm.W.row(alpha - 1).transpose().array() * fm.W.row(beta - 1).transpose().array() /
         norms.array())
            .matrix();
  b.nominal_eigenvalue = lambda_third(fm.d);
  return b;
}

BasisVector eig_v_tilde_gamma(const FeatureMap& fm, int gamma) {
  if (gamma < 1 || gamma > fm.d) throw std::out_of_range("eig_v_tilde_gamma: gamma out of range");
  const BasisVector vgg = eig_v_ab(fm, gamma, gamma);
  const BasisVector v0 = eig_v0(fm);
  BasisVector b;
  b.group = Group::G3DiagTilde;
  b.i = gamma;
  b.v = (vgg.v - std::sqrt((fm.d + 2.0) / fm.d) * v0.v) / std::numbers::sqrt2;
  b.nominal_eigenvalue = lambda_third(fm.d);
  return b;
}

BasisVector eig_v_gamma(const FeatureMap& fm, int gamma) {
  // Only d-1 of these exist: the tilde family sums to zero.
  if (gamma < 1 || gamma > fm.d - 1) throw std::out_of_range("eig_v_gamma: gamma out of range");
  const BasisVector tg = eig_v_tilde_gamma(fm, gamma);
  const BasisVector td = eig_v_tilde_gamma(fm, fm.d);
  BasisVector b;
  b.group = Group::G3Diag;
  b.i = gamma;
  b.v = tg.v - td.v / (std::sqrt(static_cast<double>(fm.d)) + 1.0);
  b.nominal_eigenvalue = lambda_third(fm.d);
  return b;
}

std::vector<BasisVector> full_basis(const FeatureMap& fm) {
  if (fm.d < 2) throw std::invalid_argument("full_basis: requires d >= 2");
  const int d = fm.d;
  std::vector<BasisVector> out;
  out.reserve(d + d * (d + 1) / 2);
  out.push_back(eig_v0(fm));
  for (int l = 1; l <= d; ++l) out.push_back(eig_vl(fm, l));
  for (int g = 1; g <= d - 1; ++g) out.push_back(eig_v_gamma(fm, g));
  for (int a = 1; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b) out.push_back(eig_v_ab(fm, a, b));
  return out;
}

Eigen::MatrixXd basis_matrix(const std::vector<BasisVector>& basis) {
  if (basis.empty()) return {};
  Eigen::MatrixXd V(basis.front().v.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) V.col(i) = basis[i].v;
  return V;
}

}  // namespace relufim
