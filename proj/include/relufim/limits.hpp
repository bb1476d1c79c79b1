#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

namespace relufim {

/// Sink for hypothesis-violation warnings (dimension below a theorem's
/// hypothesis).  The formulas still evaluate; the warning is informational.
/// Default handler does nothing.  Returns the previous handler.
using WarnHandler = std::function<void(const std::string&)>;
WarnHandler set_hypothesis_warn_handler(WarnHandler h);

/// Emits through the installed handler (no-op when none is set).
void warn_hypothesis(const std::string& msg);

/// B(a, b) = Gamma(a)Gamma(b) / Gamma(a+b) via log-gamma.
double beta_fn(double a, double b);

/// The d-dependent prefactors of the limit functions.
///   c0     = sqrt(d)   B(d/2,1/2) / (2 pi)                      (F_0)
///   c_diag = d sqrt(d+2) B(d/2,1/2) / (2 pi (d+1) sqrt(2))      (tilde F, F_gg)
///   c_off  = d sqrt(d+2) B(d/2,1/2) / (2 (d+1) pi)              (F_ab)
/// beta_half_asymptotic is the large-d cross-check sqrt(pi(2d+1))/d; it is
/// never used in evaluation.
struct SpecialConstants {
  int d = 0;
  double beta_half = 0.0;
  double c0 = 0.0;
  double c_diag = 0.0;
  double c_off = 0.0;
  double beta_half_asymptotic = 0.0;

  static SpecialConstants make(int d);
};

/// F_0(x) = c0 ||x||.  Hypothesis d > 2 (warns below).
double limit_F0(const Eigen::VectorXd& x, int d);

/// F_l(x) = x_l / 2.
double limit_Fl(const Eigen::VectorXd& x, int l);

/// Leading term of the tilde-family limit: c_diag ||x|| (r_gamma - 1/d) with
/// r_gamma = x_gamma^2 / ||x||^2.  Hypothesis d >= 6; x must be nonzero.
double limit_Ftilde(const Eigen::VectorXd& x, int gamma, int d);

/// Leading term for v^(gamma):
/// c_diag ||x|| (r_gamma - r_d/(sqrt(d)+1) - 1/(d+sqrt(d))), gamma in 1..d-1.
double limit_Fdiag(const Eigen::VectorXd& x, int gamma, int d);

/// Leading term for v^(a,b): c_off x_a x_b / ||x||, a < b.
double limit_Foffdiag(const Eigen::VectorXd& x, int alpha, int beta, int d);

/// Remainder-order envelopes from the theorems:
///   diagonal family:     r_gamma^2 ||x||
///   off-diagonal family: |x_a x_b| / ||x_ab|| * r_ab^2,
/// where x_ab = (x_a, x_b) and r_ab = ||x_ab||^2 / ||x||^2.
double remainder_envelope_diag(const Eigen::VectorXd& x, int gamma);
double remainder_envelope_offdiag(const Eigen::VectorXd& x, int alpha, int beta);

}  // namespace relufim
