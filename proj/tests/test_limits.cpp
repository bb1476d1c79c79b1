#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "relufim/limits.hpp"
#include "relufim/mc.hpp"

using namespace relufim;

namespace {

// Independent beta oracle: B(1, 1/2) = 2 exactly, then the recurrence
// B(a+1, b) = B(a, b) a/(a+b) in rational steps.
double beta_recurrence_from_one(double n_target, double b) {
  double value = 1.0 / b;  // B(1, b) = 1/b
  for (double a = 1.0; a < n_target; a += 1.0) value *= a / (a + b);
  return value;
}

Eigen::VectorXd unit_direction(int d) {
  Eigen::VectorXd x(d);
  for (int i = 0; i < d; ++i) x[i] = i + 1.0;
  x.normalize();
  return x;
}

}  // namespace

TEST_CASE("beta function against exact values and the recurrence oracle") {
  CHECK(beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(beta_fn(0.5, 0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  // B(5, 1/2) = 768/945 by four exact recurrence steps from B(1, 1/2) = 2.
  CHECK(beta_recurrence_from_one(5.0, 0.5) == doctest::Approx(768.0 / 945.0).epsilon(1e-15));
  CHECK(beta_fn(5.0, 0.5) == doctest::Approx(768.0 / 945.0).epsilon(1e-12));
  CHECK(beta_fn(5.0, 0.5) == doctest::Approx(0.812698).epsilon(1e-6));
  for (double a : {0.5, 1.5, 3.25, 10.0})
    for (double b : {0.5, 2.0, 7.5})
      CHECK(beta_fn(a + 1, b) == doctest::Approx(beta_fn(a, b) * a / (a + b)).epsilon(1e-12));
  CHECK_THROWS_AS(beta_fn(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(beta_fn(1.0, -2.0), std::domain_error);
}

TEST_CASE("special constants: monotone beta and the large-d cross-check") {
  double prev = SpecialConstants::make(3).beta_half;
  for (int d = 4; d <= 40; ++d) {
    const double cur = SpecialConstants::make(d).beta_half;
    CHECK(cur < prev);
    prev = cur;
  }
  for (int d : {50, 100, 400}) {
    const SpecialConstants c = SpecialConstants::make(d);
    CHECK(std::abs(c.beta_half_asymptotic - c.beta_half) / c.beta_half < 0.02);
  }
}

TEST_CASE("F0: value, homogeneity, zero at origin") {
  const int d = 10;
  CHECK(limit_F0(Eigen::VectorXd::Zero(d), d) == 0.0);
  const Eigen::VectorXd x = unit_direction(d);
  // sqrt(10)/(2 pi) * B(5, 1/2), with B from the rational oracle
  const double expected = std::sqrt(10.0) / (2.0 * std::numbers::pi) * (768.0 / 945.0);
  CHECK(limit_F0(x, d) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(limit_F0(x, d) == doctest::Approx(0.40902).epsilon(1e-4));
  for (double c : {0.25, 3.0})
    CHECK(limit_F0((c * x).eval(), d) == doctest::Approx(c * limit_F0(x, d)).epsilon(1e-14));
}

TEST_CASE("F0 warns below the theorem hypothesis") {
  std::vector<std::string> seen;
  auto old = set_hypothesis_warn_handler([&](const std::string& s) { seen.push_back(s); });
  limit_F0(Eigen::VectorXd::Ones(2), 2);
  CHECK(seen.size() == 1);
  limit_F0(Eigen::VectorXd::Ones(10), 10);
  CHECK(seen.size() == 1);
  set_hypothesis_warn_handler(old);
}

TEST_CASE("Fl: unit vectors, oddness, orthogonal inputs") {
  const int d = 7;
  Eigen::VectorXd e3 = Eigen::VectorXd::Zero(d);
  e3[2] = 1.0;
  CHECK(limit_Fl(e3, 3) == 0.5);
  CHECK(limit_Fl((-e3).eval(), 3) == -0.5);
  CHECK(limit_Fl(e3, 4) == 0.0);
  CHECK_THROWS_AS(limit_Fl(e3, 0), std::out_of_range);
  CHECK_THROWS_AS(limit_Fl(e3, 8), std::out_of_range);
}

TEST_CASE("Ftilde: vanishing cases and the exact-case coincidence") {
  const int d = 10;
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(double(d)));
  CHECK(limit_Ftilde(flat, 4, d) == doctest::Approx(0.0).epsilon(1e-14));

  const Eigen::VectorXd x = unit_direction(d);
  double sum = 0.0;
  for (int g = 1; g <= d; ++g) sum += limit_Ftilde(x, g, d);
  CHECK(std::abs(sum) < 1e-14);

  // At x = e_gamma the general leading term d (1 - 1/d) reproduces the exact
  // (d-1) coefficient of the x_{-gamma} = 0 branch.
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(d);
  e1[0] = 1.0;
  const SpecialConstants c = SpecialConstants::make(d);
  const double exact_case = (d - 1.0) * std::sqrt(d + 2.0) /
                            (2.0 * std::numbers::pi * (d + 1.0) * std::numbers::sqrt2) *
                            c.beta_half;
  CHECK(limit_Ftilde(e1, 1, d) == doctest::Approx(exact_case).epsilon(1e-13));
  CHECK(limit_Ftilde(e1, 1, d) == doctest::Approx(c.c_diag * (1.0 - 0.1)).epsilon(1e-13));

  CHECK_THROWS_AS(limit_Ftilde(Eigen::VectorXd::Zero(d), 1, d), std::domain_error);
}

TEST_CASE("Fdiag: component identity, zero root, e_d value") {
  const int d = 10;
  const Eigen::VectorXd x = unit_direction(d);
  for (int g : {1, 5, 9}) {
    const double expect =
        limit_Ftilde(x, g, d) - limit_Ftilde(x, d, d) / (std::sqrt(10.0) + 1.0);
    CHECK(limit_Fdiag(x, g, d) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK_THROWS_AS(limit_Fdiag(x, 10, d), std::out_of_range);

  // Root of Fdiag along the path x(t): x_1 = x_d = sqrt(t), equal middle.
  const auto path = [&](double t) {
    Eigen::VectorXd p = Eigen::VectorXd::Constant(d, std::sqrt((1.0 - 2.0 * t) / (d - 2)));
    p[0] = p[d - 1] = std::sqrt(t);
    return p;
  };
  double lo = 0.01, hi = 0.4;
  REQUIRE(limit_Fdiag(path(lo), 1, d) < 0.0);
  REQUIRE(limit_Fdiag(path(hi), 1, d) > 0.0);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (limit_Fdiag(path(mid), 1, d) < 0.0 ? lo : hi) = mid;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(1.0 / d).epsilon(1e-9));
  CHECK(std::abs(limit_Fdiag(path(0.5 * (lo + hi)), 1, d)) < 1e-12);

  Eigen::VectorXd ed = Eigen::VectorXd::Zero(d);
  ed[d - 1] = 1.0;
  const SpecialConstants c = SpecialConstants::make(d);
  const double srd = std::sqrt(10.0);
  CHECK(limit_Fdiag(ed, 3, d) ==
        doctest::Approx(c.c_diag * (-1.0 / (srd + 1.0) - 1.0 / (d + srd))).epsilon(1e-13));
}

TEST_CASE("Foffdiag: zeros, sign, exact value at a two-coordinate input") {
  const int d = 10;
  Eigen::VectorXd x = unit_direction(d);
  x[0] = 0.0;
  CHECK(limit_Foffdiag(x, 1, 2, d) == 0.0);

  Eigen::VectorXd y = unit_direction(d);
  Eigen::VectorXd yf = y;
  yf[0] = -yf[0];
  CHECK(limit_Foffdiag(yf, 1, 2, d) == doctest::Approx(-limit_Foffdiag(y, 1, 2, d)).epsilon(1e-14));

  Eigen::VectorXd xab = Eigen::VectorXd::Zero(d);
  xab[0] = xab[1] = 1.0 / std::numbers::sqrt2;
  const SpecialConstants c = SpecialConstants::make(d);
  CHECK(limit_Foffdiag(xab, 1, 2, d) == doctest::Approx(c.c_off / 2.0).epsilon(1e-13));
  CHECK_THROWS_AS(limit_Foffdiag(y, 2, 2, d), std::out_of_range);
}

TEST_CASE("every limit function is positively 1-homogeneous") {
  const int d = 8;
  const Eigen::VectorXd x = unit_direction(d);
  for (double c : {0.5, 4.0}) {
    const Eigen::VectorXd cx = c * x;
    CHECK(limit_F0(cx, d) == doctest::Approx(c * limit_F0(x, d)).epsilon(1e-13));
    CHECK(limit_Fl(cx, 2) == doctest::Approx(c * limit_Fl(x, 2)).epsilon(1e-13));
    CHECK(limit_Ftilde(cx, 2, d) == doctest::Approx(c * limit_Ftilde(x, 2, d)).epsilon(1e-13));
    CHECK(limit_Fdiag(cx, 2, d) == doctest::Approx(c * limit_Fdiag(x, 2, d)).epsilon(1e-13));
    CHECK(limit_Foffdiag(cx, 1, 3, d) ==
          doctest::Approx(c * limit_Foffdiag(x, 1, 3, d)).epsilon(1e-13));
  }
}

TEST_CASE("remainder envelopes: zero case and quadratic scaling") {
  const int d = 10;
  Eigen::VectorXd x = unit_direction(d);
  x[0] = 0.0;
  x.normalize();
  CHECK(remainder_envelope_diag(x, 1) == 0.0);

  const auto diag_path = [&](double r) {
    Eigen::VectorXd p = Eigen::VectorXd::Constant(d, std::sqrt((1.0 - r) / (d - 1)));
    p[0] = std::sqrt(r);
    return p;
  };
  for (double r : {0.4, 0.2, 0.1})
    CHECK(remainder_envelope_diag(diag_path(r / 2), 1) ==
          doctest::Approx(remainder_envelope_diag(diag_path(r), 1) / 4.0).epsilon(1e-12));
}

TEST_CASE("limit functions are orthogonal under the Gaussian inner product") {
  // Monte Carlo over x ~ N(0, I_50), one shared stream, 1e6 samples.
  const int d = 50;
  const std::int64_t n = 1000000;
  const rng::CounterStream stream(314, rng::Stream::mc_inputs);
  struct Acc {
    double s = 0, s2 = 0;
  };
  // family representatives + distinct-index pairs inside each family
  const int kf = 7;  // F0, Fl1, Fl2, Fgg1, Fgg2, Fab(1,2), Fab(3,4)
  std::vector<Acc> acc(kf * kf);
  for (std::int64_t k0 = 0; k0 < n; k0 += mc::kChunk) {
    const std::int64_t c = std::min<std::int64_t>(mc::kChunk, n - k0);
    const Eigen::MatrixXd xs = mc::gaussian_rows(stream, k0, c, d);
    for (std::int64_t t = 0; t < c; ++t) {
      const Eigen::VectorXd x = xs.row(t).transpose();
      const double f[kf] = {limit_F0(x, d),          limit_Fl(x, 1),
                            limit_Fl(x, 2),          limit_Fdiag(x, 1, d),
                            limit_Fdiag(x, 2, d),    limit_Foffdiag(x, 1, 2, d),
                            limit_Foffdiag(x, 3, 4, d)};
      for (int i = 0; i < kf; ++i)
        for (int j = i + 1; j < kf; ++j) {
          const double w = f[i] * f[j];
          acc[i * kf + j].s += w;
          acc[i * kf + j].s2 += w * w;
        }
    }
  }
  for (int i = 0; i < kf; ++i)
    for (int j = i + 1; j < kf; ++j) {
      const Acc& a = acc[i * kf + j];
      const double mean = a.s / n;
      const double se = std::sqrt(std::max(0.0, a.s2 / n - mean * mean) / n);
      INFO("pair (" << i << "," << j << "): mean=" << mean << " se=" << se);
      CHECK(std::abs(mean) < 4.0 * se + 1e-12);
    }
}
