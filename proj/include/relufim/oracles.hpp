#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "relufim/fim_metric.hpp"

namespace relufim::oracles {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int n_points = 0;
};

/// Integral of g against the sphere-marginal density of Zhat_1,
/// f(u) = (1-u^2)^((d-1)/2 - 1) / B((d-1)/2, 1/2) on [-1, 1], via tanh-sinh.
/// Requires d >= 3; throws if the integrand produces a non-finite sample.
QuadratureResult sphere_marginal_moment(int d, const std::function<double(double)>& g);

/// Three routes to E[relu(a + bZ)], Z ~ N(0,1), b != 0:
/// the closed form a Phi(a/|b|) + |b| phi(a/|b|), a counter-stream Monte
/// Carlo estimate, and a tanh-sinh quadrature of the defining integral.
struct LemmaB1Result {
  double closed = 0.0;
  double mc = 0.0;
  double mc_std_error = 0.0;
  double quad = 0.0;
  double quad_error_estimate = 0.0;
};

LemmaB1Result lemma_b1_check(double a, double b, std::int64_t n_samples = 10'000'000,
                             std::uint64_t seed = 1);

/// Population-limit integrands of the four eigenvector families (the
/// right-hand sides of the weak-LLN step), plus the two linear combinations
/// built from them.  `index` carries l / gamma / (alpha,beta).
enum class OracleGroup { G1, G2, G3DiagRaw, G3OffDiag, G3DiagTilde, G3Diag };

InnerProductEstimate group_expectation_mc(OracleGroup g, const Eigen::VectorXd& x, int d,
                                          int i, int j, std::int64_t n_samples,
                                          std::uint64_t seed);

/// One exact special case: closed form vs Monte Carlo (always) and vs
/// 1-D quadrature where the expectation reduces to one dimension.
struct SpecialCaseRow {
  std::string name;
  double closed = 0.0;
  double mc = 0.0;
  double mc_std_error = 0.0;
  double z = 0.0;          // |closed - mc| / mc_std_error
  bool has_quad = false;
  double quad = 0.0;
  double quad_abs_diff = 0.0;
  bool pass = false;
};

/// All exact cases of Theorems 1, 2, 4 and both branches of the Lemma's
/// Eq.-(6) at dimension d.  Tolerances: 4 Monte Carlo standard errors;
/// 1e-8 absolute for closed vs quadrature.
std::vector<SpecialCaseRow> special_case_table(int d, std::int64_t n_samples,
                                               std::uint64_t seed,
                                               double inject_closed_offset = 0.0);

/// One point of the remainder-order probe along a fixed-norm path.
/// deflated_ratio subtracts 4 standard errors of Monte Carlo noise from the
/// measured deviation before dividing by the envelope, so the boundedness
/// check is meaningful at small r where the remainder sinks below the noise.
struct RemainderRow {
  double r = 0.0;
  double mc = 0.0;
  double mc_std_error = 0.0;
  double leading = 0.0;
  double envelope = 0.0;
  double ratio = 0.0;
  double deflated_ratio = 0.0;
};

/// Sweep r over `r_values` on the unit sphere: for the diagonal family the
/// path is x = (sqrt(r), equal rest) probing gamma = 1; for the off-diagonal
/// family x_1 = x_2 = sqrt(r/2) with equal rest, probing (1, 2).
std::vector<RemainderRow> remainder_sweep(OracleGroup g, int d,
                                          const std::vector<double>& r_values,
                                          std::int64_t n_samples, std::uint64_t seed);

}  // namespace relufim::oracles
