#include <doctest.h>

#include <cmath>
#include <numbers>

#include "relufim/eigenvectors.hpp"

using namespace relufim;

TEST_CASE("v0 components are the scaled column norms") {
  const FeatureMap fm = generate_weights(6, 40, 2);
  const BasisVector v0 = eig_v0(fm);
  CHECK((v0.v.array() >= 0.0).all());
  for (int i = 0; i < fm.m; ++i)
    CHECK(v0.v[i] == doctest::Approx(fm.W.col(i).norm() / std::sqrt(6.0)).epsilon(1e-15));
  // (2d+1)/4pi evaluated at d=10, against the formula itself
  const FeatureMap fm10 = generate_weights(10, 4, 2);
  CHECK(eig_v0(fm10).nominal_eigenvalue ==
        doctest::Approx(21.0 / (4.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(eig_v0(fm10).nominal_eigenvalue == doctest::Approx(1.67113).epsilon(1e-5));
}

TEST_CASE("v0 maps a zero column to a zero component") {
  FeatureMap fm;
  fm.d = 2;
  fm.m = 3;
  fm.W.resize(2, 3);
  fm.W << 1, 0, 2, 1, 0, -1;
  CHECK(eig_v0(fm).v[1] == 0.0);
}

TEST_CASE("vl extracts rows") {
  FeatureMap fm;
  fm.d = 2;
  fm.m = 2;
  fm.W.resize(2, 2);
  fm.W << 1, 2, 3, 4;
  const BasisVector v = eig_vl(fm, 2);
  CHECK(v.v[0] == 3.0);
  CHECK(v.v[1] == 4.0);
  CHECK(v.nominal_eigenvalue == 0.25);
  CHECK_THROWS_AS(eig_vl(fm, 0), std::out_of_range);
  CHECK_THROWS_AS(eig_vl(fm, 3), std::out_of_range);
}

TEST_CASE("vl is deterministic") {
  const FeatureMap fm = generate_weights(5, 20, 77);
  CHECK(eig_vl(fm, 3).v == eig_vl(fm, 3).v);
}

TEST_CASE("v_ab symmetry, diagonal nonnegativity, nominal value") {
  const FeatureMap fm = generate_weights(10, 30, 5);
  const BasisVector ab = eig_v_ab(fm, 2, 7);
  const BasisVector ba = eig_v_ab(fm, 7, 2);
  CHECK(ab.v == ba.v);
  CHECK((eig_v_ab(fm, 3, 3).v.array() >= 0.0).all());
  CHECK(ab.nominal_eigenvalue ==
        doctest::Approx(1.0 / (24.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(ab.nominal_eigenvalue == doctest::Approx(0.013263).epsilon(1e-4));
}

TEST_CASE("zero column aborts the third-group construction") {
  FeatureMap fm;
  fm.d = 2;
  fm.m = 2;
  fm.W.resize(2, 2);
  fm.W << 1, 0, 1, 0;
  CHECK_THROWS_AS(eig_v_ab(fm, 1, 2), std::domain_error);
  CHECK_THROWS_AS(eig_v_tilde_gamma(fm, 1), std::domain_error);
}

TEST_CASE("tilde family sums to zero") {
  const FeatureMap fm = generate_weights(5, 50, 8);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(fm.m);
  for (int g = 1; g <= fm.d; ++g) sum += eig_v_tilde_gamma(fm, g).v;
  CHECK(sum.lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK_THROWS_AS(eig_v_tilde_gamma(fm, 6), std::out_of_range);
  CHECK(eig_v_tilde_gamma(fm, 2).v == eig_v_tilde_gamma(fm, 2).v);
}

TEST_CASE("v_gamma linear identities") {
  const FeatureMap fm = generate_weights(10, 64, 3);
  const double srd = std::sqrt(10.0);
  for (int g : {1, 4, 9}) {
    const Eigen::VectorXd lhs = eig_v_gamma(fm, g).v + eig_v_tilde_gamma(fm, 10).v / (srd + 1.0);
    const Eigen::VectorXd rhs = eig_v_tilde_gamma(fm, g).v;
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <
          1e-12 * rhs.lpNorm<Eigen::Infinity>() + 1e-15);
  }
  CHECK_THROWS_AS(eig_v_gamma(fm, 10), std::out_of_range);
  CHECK(eig_v_gamma(fm, 1).nominal_eigenvalue == eig_v_ab(fm, 1, 2).nominal_eigenvalue);
}

TEST_CASE("full_basis counts and canonical order") {
  const FeatureMap fm10 = generate_weights(10, 12, 1);
  const auto basis10 = full_basis(fm10);
  CHECK(basis10.size() == 65);  // d + d(d+1)/2 at d = 10
  const FeatureMap fm2 = generate_weights(2, 6, 1);
  CHECK(full_basis(fm2).size() == 5);

  CHECK(basis10[0].group == Group::G1);
  for (int l = 1; l <= 10; ++l) {
    CHECK(basis10[l].group == Group::G2);
    CHECK(basis10[l].i == l);
  }
  for (int g = 1; g <= 9; ++g) {
    CHECK(basis10[10 + g].group == Group::G3Diag);
    CHECK(basis10[10 + g].i == g);
  }
  int at = 20;
  for (int a = 1; a <= 10; ++a)
    for (int b = a + 1; b <= 10; ++b) {
      CHECK(basis10[at].group == Group::G3OffDiag);
      CHECK(basis10[at].i == a);
      CHECK(basis10[at].j == b);
      ++at;
    }

  // ordering stable across calls
  const auto again = full_basis(fm10);
  for (std::size_t i = 0; i < basis10.size(); ++i) CHECK(basis10[i].v == again[i].v);
}

TEST_CASE("large-m normalization of v0 and vl") {
  const FeatureMap fm = generate_weights(8, 10000, 21);
  CHECK(std::abs(eig_v0(fm).v.squaredNorm() - 1.0) < 0.1);
  for (int l = 1; l <= 8; ++l) CHECK(std::abs(eig_vl(fm, l).v.squaredNorm() - 1.0) < 0.1);
}
