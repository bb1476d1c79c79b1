#include "relufim/limits.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relufim {

namespace {

WarnHandler g_warn;  // default: silent

void warn(const std::string& msg) {
  if (g_warn) g_warn(msg);
}

void check_dim(const Eigen::VectorXd& x, int d, const char* who) {
  if (x.size() != d) throw std::invalid_argument(std::string(who) + ": x has wrong dimension");
}

double norm_nonzero(const Eigen::VectorXd& x, const char* who) {
  const double n = x.norm();
  if (n == 0.0) throw std::domain_error(std::string(who) + ": x must be nonzero");
  return n;
}

}  // namespace

WarnHandler set_hypothesis_warn_handler(WarnHandler h) {
  WarnHandler old = std::move(g_warn);
  g_warn = std::move(h);
  return old;
}

void warn_hypothesis(const std::string& msg) { warn(msg); }

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_fn: arguments must be positive");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

SpecialConstants SpecialConstants::make(int d) {
  if (d < 1) throw std::invalid_argument("SpecialConstants: d must be positive");
  SpecialConstants c;
  c.d = d;
  c.beta_half = beta_fn(d / 2.0, 0.5);
  const double pi = std::numbers::pi;
  c.c0 = std::sqrt(static_cast<double>(d)) * c.beta_half / (2.0 * pi);
  c.c_diag = d * std::sqrt(d + 2.0) * c.beta_half / (2.0 * pi * (d + 1.0) * std::numbers::sqrt2);
  c.c_off = d * std::sqrt(d + 2.0) * c.beta_half / (2.0 * (d + 1.0) * pi);
  c.beta_half_asymptotic = std::sqrt(pi * (2.0 * d + 1.0)) / d;
  return c;
}

double limit_F0(const Eigen::VectorXd& x, int d) {
  check_dim(x, d, "limit_F0");
  if (d <= 2) warn("limit_F0: theorem hypothesis d > 2 violated (d=" + std::to_string(d) + ")");
  return SpecialConstants::make(d).c0 * x.norm();
}

double limit_Fl(const Eigen::VectorXd& x, int l) {
  if (l < 1 || l > x.size()) throw std::out_of_range("limit_Fl: l out of range");
  return x[l - 1] / 2.0;
}

double limit_Ftilde(const Eigen::VectorXd& x, int gamma, int d) {
  check_dim(x, d, "limit_Ftilde");
  if (gamma < 1 || gamma > d) throw std::out_of_range("limit_Ftilde: gamma out of range");
  if (d < 6) warn("limit_Ftilde: lemma hypothesis d >= 6 violated (d=" + std::to_string(d) + ")");
  const double n = norm_nonzero(x, "limit_Ftilde");
  const double rg = x[gamma - 1] * x[gamma - 1] / (n * n);
  return SpecialConstants::make(d).c_diag * n * (rg - 1.0 / d);
}

double limit_Fdiag(const Eigen::VectorXd& x, int gamma, int d) {
  check_dim(x, d, "limit_Fdiag");
  if (gamma < 1 || gamma > d - 1) throw std::out_of_range("limit_Fdiag: gamma out of range");
  if (d < 6) warn("limit_Fdiag: theorem hypothesis d >= 6 violated (d=" + std::to_string(d) + ")");
  const double n = norm_nonzero(x, "limit_Fdiag");
  const double sqd = std::sqrt(static_cast<double>(d));
  const double rg = x[gamma - 1] * x[gamma - 1] / (n * n);
  const double rd = x[d - 1] * x[d - 1] / (n * n);
  return SpecialConstants::make(d).c_diag * n * (rg - rd / (sqd + 1.0) - 1.0 / (d + sqd));
}

double limit_Foffdiag(const Eigen::VectorXd& x, int alpha, int beta, int d) {
  check_dim(x, d, "limit_Foffdiag");
  if (alpha < 1 || beta > d || alpha >= beta)
    throw std::out_of_range("limit_Foffdiag: need 1 <= alpha < beta <= d");
  if (d < 6)
    warn("limit_Foffdiag: theorem hypothesis d >= 6 violated (d=" + std::to_string(d) + ")");
  const double n = norm_nonzero(x, "limit_Foffdiag");
  return SpecialConstants::make(d).c_off * x[alpha - 1] * x[beta - 1] / n;
}

double remainder_envelope_diag(const Eigen::VectorXd& x, int gamma) {
  if (gamma < 1 || gamma > x.size()) throw std::out_of_range("remainder envelope: gamma");
  const double n = norm_nonzero(x, "remainder_envelope_diag");
  const double rg = x[gamma - 1] * x[gamma - 1] / (n * n);
  return rg * rg * n;
}

double remainder_envelope_offdiag(const Eigen::VectorXd& x, int alpha, int beta) {
  if (alpha < 1 || beta > x.size() || alpha >= beta)
    throw std::out_of_range("remainder envelope: (alpha, beta)");
  const double n = norm_nonzero(x, "remainder_envelope_offdiag");
  const double xa = x[alpha - 1], xb = x[beta - 1];
  const double nab = std::hypot(xa, xb);
  if (nab == 0.0) return 0.0;
  const double rab = nab * nab / (n * n);
  return std::abs(xa * xb) / nab * rab * rab;
}

}  // namespace relufim
