#include "relufim/oracles.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relufim/limits.hpp"
#include "relufim/mc.hpp"

namespace relufim::oracles {

namespace {

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double Phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

InnerProductEstimate reduce_mean(const mc::PairwiseReducer<Eigen::Vector2d>& acc,
                                 std::int64_t n, std::uint64_t seed) {
  const Eigen::Vector2d s = acc.total(Eigen::Vector2d::Zero());
  InnerProductEstimate est;
  est.value = s[0] / n;
  est.std_error = std::sqrt(std::max(0.0, (s[1] - n * est.value * est.value) / (n - 1.0)) / n);
  est.n_samples = n;
  est.seed = seed;
  return est;
}

// Per-sample integrand of the requested family limit, vectorized per chunk.
Eigen::ArrayXd group_values(OracleGroup g, const Eigen::VectorXd& x, int d, int i, int j,
                            const Eigen::MatrixXd& z) {
  const Eigen::ArrayXd act = (z * x).array().max(0.0);
  const Eigen::ArrayXd nz = z.rowwise().norm().array();
  const double sd2 = std::sqrt(d + 2.0);
  switch (g) {
    case OracleGroup::G1:
      return act * nz / std::sqrt(static_cast<double>(d));
    case OracleGroup::G2:
      return act * z.col(i - 1).array();
    case OracleGroup::G3DiagRaw:
      return sd2 * act * z.col(i - 1).array().square() / nz;
    case OracleGroup::G3OffDiag:
      return sd2 * act * z.col(i - 1).array() * z.col(j - 1).array() / nz;
    case OracleGroup::G3DiagTilde: {
      const Eigen::ArrayXd raw = sd2 * act * z.col(i - 1).array().square() / nz;
      const Eigen::ArrayXd g1 = act * nz / std::sqrt(static_cast<double>(d));
      return (raw - std::sqrt((d + 2.0) / d) * g1) / std::numbers::sqrt2;
    }
    case OracleGroup::G3Diag: {
      const Eigen::ArrayXd g1 = act * nz / std::sqrt(static_cast<double>(d));
      const auto tilde = [&](int gamma) -> Eigen::ArrayXd {
        const Eigen::ArrayXd raw = sd2 * act * z.col(gamma - 1).array().square() / nz;
        return (raw - std::sqrt((d + 2.0) / d) * g1) / std::numbers::sqrt2;
      };
      return tilde(i) - tilde(d) / (std::sqrt(static_cast<double>(d)) + 1.0);
    }
  }
  throw std::logic_error("group_values: unknown group");
}

}  // namespace

QuadratureResult sphere_marginal_moment(int d, const std::function<double(double)>& g) {
  if (d < 3) throw std::invalid_argument("sphere_marginal_moment: requires d >= 3");
  const double norm = beta_fn((d - 1) / 2.0, 0.5);
  const double expo = (d - 1) / 2.0 - 1.0;
  int evals = 0;
  const auto integrand = [&](double u, double uc) {
    // For |u| > 1/2 the nearer endpoint is +-1 and |uc| is the distance to
    // it, so (1-u^2) = |uc|(1+|u|) avoids cancellation under tanh-sinh's
    // endpoint clustering; elsewhere the direct product is exact enough.
    const double one_minus_u2 =
        std::abs(u) > 0.5 ? std::abs(uc) * (1.0 + std::abs(u)) : (1.0 - u) * (1.0 + u);
    const double value = g(u) * std::pow(one_minus_u2, expo) / norm;
    if (!std::isfinite(value)) throw std::domain_error("sphere_marginal_moment: non-finite integrand");
    ++evals;
    return value;
  };
  // Split at zero: the density concentrates in a O(d^{-1/2}) bump around the
  // origin, and making the origin an endpoint puts tanh-sinh's dense node
  // region exactly there (it also turns the ReLU kink into an endpoint).
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err_lo = 0.0, err_hi = 0.0, l1_lo = 0.0, l1_hi = 0.0;
  const double lo = integrator.integrate(integrand, -1.0, 0.0, 1e-12, &err_lo, &l1_lo);
  const double hi = integrator.integrate(integrand, 0.0, 1.0, 1e-12, &err_hi, &l1_hi);
  QuadratureResult q;
  q.value = lo + hi;
  // boost reports relative error against the L1 norm of each piece
  q.abs_error_estimate = err_lo * l1_lo + err_hi * l1_hi;
  q.n_points = evals;
  return q;
}

LemmaB1Result lemma_b1_check(double a, double b, std::int64_t n_samples, std::uint64_t seed) {
  if (b == 0.0) throw std::domain_error("lemma_b1_check: requires b != 0");
  LemmaB1Result r;
  const double ab = std::abs(b);
  r.closed = a * Phi(a / ab) + ab * phi(a / ab);

  const rng::CounterStream stream(seed, rng::Stream::mc_inputs);
  mc::PairwiseReducer<Eigen::Vector2d> acc;
  std::vector<double> buf(mc::kChunk);
  for (std::int64_t k0 = 0; k0 < n_samples; k0 += mc::kChunk) {
    const std::int64_t c = std::min(mc::kChunk, n_samples - k0);
    stream.normal_fill(buf.data(), static_cast<std::uint64_t>(k0), static_cast<std::uint64_t>(c));
    double s = 0.0, s2 = 0.0;
    // |b| keeps result(a, b) == result(a, -b) bit-exact (Z and -Z share a law).
    for (std::int64_t t = 0; t < c; ++t) {
      const double w = std::max(0.0, a + ab * buf[static_cast<std::size_t>(t)]);
      s += w;
      s2 += w * w;
    }
    acc.add(Eigen::Vector2d(s, s2));
  }
  const InnerProductEstimate est = reduce_mean(acc, n_samples, seed);
  r.mc = est.value;
  r.mc_std_error = est.std_error;

  // relu(a + |b| z) phi(z) is smooth on [lo, hi] once the kink at -a/|b| is
  // made an endpoint.  The window must stay comparable to the width of the
  // Gaussian bump or tanh-sinh's coarse levels can step right over it; the
  // mass beyond |z| = 8.5 is ~1e-17, far below the 1e-8 route tolerance.
  // The two-argument integrand hands tanh-sinh the endpoint offset, where
  // a + |b| z == |b| zc exactly.
  const double hi = 8.5;
  const double lo = std::max(-a / ab, -hi);
  if (lo >= hi) {
    r.quad = 0.0;
  } else {
    boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0, l1 = 0.0;
    const double mid = 0.5 * (lo + hi);
    r.quad = integrator.integrate(
        [&](double z, double zc) {
          const double ramp = (z < mid && lo > -hi) ? ab * std::abs(zc) : a + ab * z;
          return ramp * phi(z);
        },
        lo, hi, 1e-12, &error, &l1);
    r.quad_error_estimate = error * l1;
  }
  return r;
}

InnerProductEstimate group_expectation_mc(OracleGroup g, const Eigen::VectorXd& x, int d,
                                          int i, int j, std::int64_t n_samples,
                                          std::uint64_t seed) {
  if (x.size() != d) throw std::invalid_argument("group_expectation_mc: x has wrong dimension");
  if (!x.allFinite()) throw std::invalid_argument("group_expectation_mc: x must be finite");
  if (n_samples < 2) throw std::invalid_argument("group_expectation_mc: n_samples >= 2");

  const rng::CounterStream stream(seed, rng::Stream::mc_inputs);
  mc::PairwiseReducer<Eigen::Vector2d> acc;
  for (std::int64_t k0 = 0; k0 < n_samples; k0 += mc::kChunk) {
    const std::int64_t c = std::min(mc::kChunk, n_samples - k0);
    const Eigen::MatrixXd z = mc::gaussian_rows(stream, k0, c, d);
    const Eigen::ArrayXd w = group_values(g, x, d, i, j, z);
    acc.add(Eigen::Vector2d(w.sum(), w.square().sum()));
  }
  return reduce_mean(acc, n_samples, seed);
}

std::vector<SpecialCaseRow> special_case_table(int d, std::int64_t n_samples,
                                               std::uint64_t seed,
                                               double inject_closed_offset) {
  if (d < 6) throw std::invalid_argument("special_case_table: requires d >= 6");
  const SpecialConstants sc = SpecialConstants::make(d);
  const double pi = std::numbers::pi;
  std::vector<SpecialCaseRow> rows;
  std::uint64_t sub = 0;

  const auto add_row = [&](std::string name, double closed, const InnerProductEstimate& mcv,
                           bool has_quad, double quad) {
    SpecialCaseRow r;
    r.name = std::move(name);
    r.closed = closed + inject_closed_offset;
    r.mc = mcv.value;
    r.mc_std_error = mcv.std_error;
    r.z = mcv.std_error > 0 ? std::abs(r.closed - r.mc) / mcv.std_error
                            : (r.closed == r.mc ? 0.0 : std::numeric_limits<double>::infinity());
    r.has_quad = has_quad;
    if (has_quad) {
      r.quad = quad;
      r.quad_abs_diff = std::abs(r.closed - quad);
    }
    r.pass = r.z < 4.0 && (!has_quad || r.quad_abs_diff < 1e-8);
    rows.push_back(std::move(r));
  };

  // Theorem 1, generic direction, ||x|| = 1.
  Eigen::VectorXd xg(d);
  for (int t = 0; t < d; ++t) xg[t] = t + 1.0;
  xg.normalize();
  {
    const auto est = group_expectation_mc(OracleGroup::G1, xg, d, 0, 0, n_samples, seed + sub++);
    const auto q = sphere_marginal_moment(d, [](double u) { return std::max(u, 0.0); });
    add_row("thm1_generic_x", sc.c0, est, true, std::sqrt(static_cast<double>(d)) * q.value);
  }

  // Theorem 2 at x = e_l and at a generic x (both exact).
  {
    Eigen::VectorXd e2 = Eigen::VectorXd::Zero(d);
    e2[1] = 1.0;
    const auto est = group_expectation_mc(OracleGroup::G2, e2, d, 2, 0, n_samples, seed + sub++);
    // 1-D route: E[relu(z) z] over N(0,1).
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double quad =
        integrator.integrate([](double z, double) { return z * z * phi(z); }, 0.0, 8.5, 1e-12);
    add_row("thm2_unit_x", 0.5, est, true, quad);
  }
  {
    const int l = 1;
    const auto est = group_expectation_mc(OracleGroup::G2, xg, d, l, 0, n_samples, seed + sub++);
    // Appendix-B intermediate: E[x_l Z^2 Phi(x_l Z / ||x_-l||)] is 1-D.
    const double xl = xg[l - 1];
    const double rest = std::sqrt(std::max(0.0, xg.squaredNorm() - xl * xl));
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double quad = integrator.integrate(
        [&](double z, double) { return xl * z * z * phi(z) * Phi(xl * z / rest); }, -8.5, 8.5,
        1e-12);
    add_row("thm2_generic_x", xl / 2.0, est, true, quad);
  }

  // Lemma Eq. (6), branch x_{-gamma} = 0 (take x = e_1, gamma = 1).
  {
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(d);
    e1[0] = 1.0;
    const auto est =
        group_expectation_mc(OracleGroup::G3DiagTilde, e1, d, 1, 0, n_samples, seed + sub++);
    const double closed =
        (d - 1.0) * std::sqrt(d + 2.0) / (2.0 * pi * (d + 1.0) * std::numbers::sqrt2) * sc.beta_half;
    const auto qraw = sphere_marginal_moment(d, [](double u) { return std::max(u, 0.0) * u * u; });
    const auto qg1 = sphere_marginal_moment(d, [](double u) { return std::max(u, 0.0); });
    const double quad = (d * std::sqrt(d + 2.0) * qraw.value -
                         std::sqrt((d + 2.0) / d) * std::sqrt(static_cast<double>(d)) * qg1.value) /
                        std::numbers::sqrt2;
    add_row("lemma_eq6_xminus_zero", closed, est, true, quad);
  }

  // Lemma Eq. (6), branch x_gamma = 0 (equal mass on the other coordinates).
  {
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(d - 1.0));
    x0[0] = 0.0;
    const auto est =
        group_expectation_mc(OracleGroup::G3DiagTilde, x0, d, 1, 0, n_samples, seed + sub++);
    const double closed =
        -std::sqrt(d + 2.0) / (2.0 * pi * (d + 1.0) * std::numbers::sqrt2) * sc.beta_half;
    // Raw-family quadrature: d sqrt(d+2) ||x_-g|| E[Zhat^2 sqrt(1-Zhat^2)] / ((d-2) B((d-2)/2, 1/2)).
    const auto qcase = sphere_marginal_moment(
        d, [](double u) { return u * u * std::sqrt(std::max(0.0, 1.0 - u * u)); });
    const double raw = d * std::sqrt(d + 2.0) * qcase.value / ((d - 2.0) * beta_fn((d - 2) / 2.0, 0.5));
    const auto qg1 = sphere_marginal_moment(d, [](double u) { return std::max(u, 0.0); });
    const double g1_at_x0 = std::sqrt(static_cast<double>(d)) * qg1.value;  // ||x0|| = 1
    const double quad = (raw - std::sqrt((d + 2.0) / d) * g1_at_x0) / std::numbers::sqrt2;
    add_row("lemma_eq6_xgamma_zero", closed, est, true, quad);
  }

  // Theorem 4, zero branch (x_alpha = 0).
  {
    Eigen::VectorXd xz = Eigen::VectorXd::Zero(d);
    xz[1] = 1.0;
    xz[3] = 2.0;
    const auto est =
        group_expectation_mc(OracleGroup::G3OffDiag, xz, d, 1, 2, n_samples, seed + sub++);
    add_row("thm4_zero_case", 0.0, est, false, 0.0);
  }

  // Theorem 4, branch x_{-alpha beta} = 0 with x = (e_1 + e_2)/sqrt(2).
  {
    Eigen::VectorXd xab = Eigen::VectorXd::Zero(d);
    xab[0] = xab[1] = 1.0 / std::numbers::sqrt2;
    const auto est =
        group_expectation_mc(OracleGroup::G3OffDiag, xab, d, 1, 2, n_samples, seed + sub++);
    const double closed =
        d * std::sqrt(d + 2.0) / (2.0 * pi * (d + 1.0)) * sc.beta_half * (xab[0] * xab[1]);
    add_row("thm4_xminusab_zero", closed, est, false, 0.0);
  }

  return rows;
}

std::vector<RemainderRow> remainder_sweep(OracleGroup g, int d,
                                          const std::vector<double>& r_values,
                                          std::int64_t n_samples, std::uint64_t seed) {
  if (g != OracleGroup::G3DiagTilde && g != OracleGroup::G3OffDiag)
    throw std::invalid_argument("remainder_sweep: only the two third-group families have remainders");
  if (d < 6) throw std::invalid_argument("remainder_sweep: requires d >= 6");
  std::vector<RemainderRow> rows;
  std::uint64_t sub = 0;
  for (double r : r_values) {
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("remainder_sweep: r must be in (0, 1]");
    Eigen::VectorXd x(d);
    RemainderRow row;
    row.r = r;
    if (g == OracleGroup::G3DiagTilde) {
      const double rest = d > 1 ? std::sqrt((1.0 - r) / (d - 1)) : 0.0;
      x.setConstant(rest);
      x[0] = std::sqrt(r);
      row.leading = limit_Ftilde(x, 1, d);
      row.envelope = remainder_envelope_diag(x, 1);
      const auto est = group_expectation_mc(g, x, d, 1, 0, n_samples, seed + sub++);
      row.mc = est.value;
      row.mc_std_error = est.std_error;
    } else {
      const double rest = d > 2 ? std::sqrt((1.0 - r) / (d - 2)) : 0.0;
      x.setConstant(rest);
      x[0] = x[1] = std::sqrt(r / 2.0);
      row.leading = limit_Foffdiag(x, 1, 2, d);
      row.envelope = remainder_envelope_offdiag(x, 1, 2);
      const auto est = group_expectation_mc(g, x, d, 1, 2, n_samples, seed + sub++);
      row.mc = est.value;
      row.mc_std_error = est.std_error;
    }
    const double dev = std::abs(row.mc - row.leading);
    row.ratio = row.envelope > 0 ? dev / row.envelope : 0.0;
    row.deflated_ratio =
        row.envelope > 0 ? std::max(0.0, dev - 4.0 * row.mc_std_error) / row.envelope : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace relufim::oracles
