#include "relufim/dynamics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "relufim/fim_metric.hpp"
#include "relufim/limits.hpp"
#include "relufim/mc.hpp"

namespace relufim {

Eigen::VectorXd default_gd_target(int m, std::uint64_t seed) {
  const rng::CounterStream s(seed, rng::Stream::gd_target);
  Eigen::VectorXd v(m);
  s.normal_fill(v.data(), 0, static_cast<std::uint64_t>(m));
  v.normalize();
  return v;
}

GDResult run_gd(const GDConfig& cfg, const FeatureMap& fm, const std::vector<BasisVector>& basis) {
  if (cfg.step <= 0.0) throw std::invalid_argument("run_gd: step must be positive");
  if (cfg.iters < 1) throw std::invalid_argument("run_gd: iters must be >= 1");
  if (cfg.noise_std < 0.0) throw std::invalid_argument("run_gd: noise_std must be >= 0");
  if (cfg.d != fm.d || cfg.m != fm.m) throw std::invalid_argument("run_gd: config/feature-map mismatch");
  const int m = fm.m;
  const int k = static_cast<int>(basis.size());

  GDResult res;
  res.target_v = cfg.target_v.size() ? cfg.target_v : default_gd_target(m, cfg.seed);
  if (res.target_v.size() != m) throw std::invalid_argument("run_gd: target_v has wrong length");
  Eigen::VectorXd v = cfg.v_init.size() ? cfg.v_init : Eigen::VectorXd::Zero(m);
  if (v.size() != m) throw std::invalid_argument("run_gd: v_init has wrong length");

  Eigen::VectorXd lam(k);
  for (int i = 0; i < k; ++i) lam[i] = basis[i].nominal_eigenvalue;
  const Eigen::MatrixXd V = basis_matrix(basis);

  // Hessian of the active loss; population mode owns the dense matrix,
  // empirical mode keeps the n x m design and stays matrix-free.
  Eigen::MatrixXd J;          // population
  Eigen::MatrixXd A;          // empirical design, n x m
  Eigen::VectorXd y;          // empirical targets
  Eigen::MatrixXd JV(m, k);   // J * V, for projections
  if (cfg.mode == GDMode::population) {
    if (cfg.n_train < 1) throw std::invalid_argument("run_gd: n_train >= 1");
    J = empirical_fim_explicit(fm, cfg.n_train, cfg.seed);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    res.lambda_max_hat = es.eigenvalues()[m - 1];
    res.divergence_warning = cfg.step >= 2.0 / res.lambda_max_hat;
    JV.noalias() = J * V;
  } else {
    if (cfg.n_train < 1) throw std::invalid_argument("run_gd: n_train >= 1");
    const rng::CounterStream xs(cfg.seed, rng::Stream::mc_inputs);
    const Eigen::MatrixXd inputs = mc::gaussian_rows(xs, 0, cfg.n_train, fm.d);
    A = activate_rows(fm, inputs);
    y = A * res.target_v;
    if (cfg.noise_std > 0.0) {
      const rng::CounterStream ns(cfg.seed, rng::Stream::gd_noise);
      Eigen::VectorXd eps(cfg.n_train);
      ns.normal_fill(eps.data(), 0, static_cast<std::uint64_t>(cfg.n_train));
      y += cfg.noise_std * eps;
    }
    JV.noalias() = A.transpose() * (A * V) / double(cfg.n_train);
  }

  res.rayleigh.resize(k);
  for (int i = 0; i < k; ++i) res.rayleigh[i] = V.col(i).dot(JV.col(i)) / V.col(i).squaredNorm();

  res.trajectory.reserve(cfg.iters + 1);
  for (int t = 0; t <= cfg.iters; ++t) {
    Eigen::VectorXd grad;
    double loss;
    if (cfg.mode == GDMode::population) {
      const Eigen::VectorXd e = v - res.target_v;
      grad.noalias() = J * e;
      loss = 0.5 * e.dot(grad);
    } else {
      const Eigen::VectorXd r = A * v - y;
      grad.noalias() = A.transpose() * r / double(cfg.n_train);
      loss = 0.5 * r.squaredNorm() / double(cfg.n_train);
    }
    TrajectoryRecord rec;
    rec.iter = t;
    rec.loss = loss;
    const Eigen::VectorXd e = v - res.target_v;
    rec.proj = (JV.transpose() * e).cwiseQuotient(lam);
    res.trajectory.push_back(std::move(rec));
    if (t < cfg.iters) v -= cfg.step * grad;
  }
  return res;
}

double rate_fit(const std::vector<TrajectoryRecord>& traj, int basis_index, int t_begin,
                int t_end, double floor) {
  const int n = static_cast<int>(traj.size());
  if (t_end < 0) t_end = n;
  if (t_begin < 0) t_begin = static_cast<int>(std::ceil(0.1 * t_end));
  if (t_begin < 0 || t_end > n || t_begin >= t_end)
    throw std::invalid_argument("rate_fit: bad window");

  // Plain least squares of log|p| on t over the in-window samples above floor.
  double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (int t = t_begin; t < t_end; ++t) {
    const double p = std::abs(traj[t].proj[basis_index]);
    if (!(p > floor)) continue;
    const double y = std::log(p);
    sw += 1;
    st += t;
    sy += y;
    stt += double(t) * t;
    sty += double(t) * y;
  }
  if (sw < 10)
    throw std::runtime_error("rate_fit: projection below noise floor for the whole window");
  const double det = sw * stt - st * st;
  if (det == 0.0) throw std::runtime_error("rate_fit: degenerate window");
  return (sw * sty - st * sy) / det;
}

Expansion expand_in_basis(const FeatureMap& fm, const Eigen::VectorXd& v,
                          const std::vector<BasisVector>& basis, std::int64_t n_samples,
                          std::uint64_t seed) {
  if (v.size() != fm.m) throw std::invalid_argument("expand_in_basis: v has wrong length");
  if (v.norm() > 1.0 + 1e-12)
    warn_hypothesis("expand_in_basis: ||v|| > 1, outside the regime where the residual is small");

  std::vector<BasisVector> extended = basis;
  BasisVector target;
  target.group = Group::G1;
  target.v = v;
  target.nominal_eigenvalue = 1.0;
  extended.push_back(target);

  const GramSummary gs = gram_summary(fm, extended, n_samples, seed);
  const int k = static_cast<int>(basis.size());
  const Eigen::MatrixXd G = gs.gram.topLeftCorner(k, k);
  const Eigen::VectorXd b = gs.gram.topRightCorner(k, 1);
  const double vv = gs.gram(k, k);

  Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  const Eigen::VectorXd dvec = ldlt.vectorD();
  if (dvec.minCoeff() <= 1e-10 * dvec.maxCoeff())
    throw std::runtime_error("expand_in_basis: Gram matrix is rank-deficient");

  Expansion e;
  e.coeffs = ldlt.solve(b);
  e.fv_norm_sq = vv;
  e.residual_norm = std::sqrt(std::max(0.0, vv - 2.0 * e.coeffs.dot(b) + e.coeffs.dot(G * e.coeffs)));
  return e;
}

}  // namespace relufim
