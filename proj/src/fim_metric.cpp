#include "relufim/fim_metric.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "relufim/mc.hpp"

namespace relufim {

namespace {

double sample_std_error(double sum, double sum_sq, std::int64_t n) {
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return std::sqrt(var / n);
}

// Eigen splits the K dimension across threads for small-result products like
// P^T P, which makes the summation order depend on the thread count.  Those
// reductions run under this guard so results are identical for any worker
// count; the large row-partitioned products stay parallel.
class SingleThreadGuard {
 public:
  SingleThreadGuard() : saved_(Eigen::nbThreads()) { Eigen::setNbThreads(1); }
  ~SingleThreadGuard() { Eigen::setNbThreads(saved_); }

 private:
  int saved_;
};

}  // namespace

InnerProductEstimate inner_product_mc(const FeatureMap& fm, const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& v, std::int64_t n_samples,
                                      std::uint64_t seed) {
  if (u.size() != fm.m || v.size() != fm.m)
    throw std::invalid_argument("inner_product_mc: vector length != m");
  if (n_samples < 2)
    throw std::invalid_argument("inner_product_mc: need n_samples >= 2 to estimate the error");

  const rng::CounterStream stream(seed, rng::Stream::mc_inputs);
  mc::PairwiseReducer<Eigen::Vector2d> acc;  // [sum, sum of squares]
  for (std::int64_t k0 = 0; k0 < n_samples; k0 += mc::kChunk) {
    const std::int64_t c = std::min(mc::kChunk, n_samples - k0);
    const Eigen::MatrixXd xs = mc::gaussian_rows(stream, k0, c, fm.d);
    const Eigen::MatrixXd a = activate_rows(fm, xs);
    const Eigen::ArrayXd w = (a * u).array() * (a * v).array();
    acc.add(Eigen::Vector2d(w.sum(), w.square().sum()));
  }
  const Eigen::Vector2d s = acc.total(Eigen::Vector2d::Zero());
  InnerProductEstimate est;
  est.value = s[0] / n_samples;
  est.std_error = sample_std_error(s[0], s[1], n_samples);
  est.n_samples = n_samples;
  est.seed = seed;
  return est;
}

Eigen::MatrixXd empirical_fim_explicit(const FeatureMap& fm, std::int64_t n_samples,
                                       std::uint64_t seed, int cap) {
  if (fm.m > cap)
    throw std::invalid_argument(
        "empirical_fim_explicit: m exceeds the explicit-mode cap; use the matrix-free "
        "inner_product_mc estimator instead");
  if (n_samples < 1) throw std::invalid_argument("empirical_fim_explicit: n_samples >= 1");

  const rng::CounterStream stream(seed, rng::Stream::mc_inputs);
  mc::PairwiseReducer<Eigen::MatrixXd> acc;
  for (std::int64_t k0 = 0; k0 < n_samples; k0 += mc::kChunk) {
    const std::int64_t c = std::min(mc::kChunk, n_samples - k0);
    const Eigen::MatrixXd xs = mc::gaussian_rows(stream, k0, c, fm.d);
    const Eigen::MatrixXd a = activate_rows(fm, xs);
    Eigen::MatrixXd part = Eigen::MatrixXd::Zero(fm.m, fm.m);
    part.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    acc.add(std::move(part));
  }
  Eigen::MatrixXd j = acc.total(Eigen::MatrixXd::Zero(fm.m, fm.m)) / double(n_samples);
  // Lower triangle holds the accumulated values; mirroring makes J exactly
  // symmetric before any eigendecomposition.
  j.triangularView<Eigen::StrictlyUpper>() = j.transpose();
  return j;
}

GramSummary gram_summary(const FeatureMap& fm, const std::vector<BasisVector>& basis,
                         std::int64_t n_samples, std::uint64_t seed) {
  if (basis.empty()) throw std::invalid_argument("gram_summary: empty basis");
  for (const auto& b : basis)
    if (b.v.size() != fm.m) throw std::invalid_argument("gram_summary: basis vector length != m");
  if (n_samples < 2) throw std::invalid_argument("gram_summary: need n_samples >= 2");

  const Eigen::MatrixXd V = basis_matrix(basis);
  const int k = static_cast<int>(basis.size());
  const rng::CounterStream stream(seed, rng::Stream::mc_inputs);
  mc::PairwiseReducer<Eigen::MatrixXd> acc;   // k x 2k: [sum f_i f_j | sum (f_i f_j)^2]
  for (std::int64_t k0 = 0; k0 < n_samples; k0 += mc::kChunk) {
    const std::int64_t c = std::min(mc::kChunk, n_samples - k0);
    const Eigen::MatrixXd xs = mc::gaussian_rows(stream, k0, c, fm.d);
    const Eigen::MatrixXd p = activate_rows(fm, xs) * V;            // c x k
    const Eigen::MatrixXd p2 = p.array().square().matrix();
    Eigen::MatrixXd part(k, 2 * k);
    {
      const SingleThreadGuard guard;
      part.leftCols(k).noalias() = p.transpose() * p;
      part.rightCols(k).noalias() = p2.transpose() * p2;
    }
    acc.add(std::move(part));
  }
  const Eigen::MatrixXd tot = acc.total(Eigen::MatrixXd::Zero(k, 2 * k));

  GramSummary g;
  g.gram = tot.leftCols(k) / double(n_samples);
  g.std_error.resize(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      g.std_error(i, j) = sample_std_error(tot(i, j), tot(i, k + j), n_samples);
  g.nominal.resize(k);
  for (int i = 0; i < k; ++i) g.nominal[i] = basis[i].nominal_eigenvalue;
  g.max_offdiag_abs = 0.0;
  g.max_diag_reldev = 0.0;
  for (int i = 0; i < k; ++i) {
    g.max_diag_reldev = std::max(g.max_diag_reldev, std::abs(g.gram(i, i) / g.nominal[i] - 1.0));
    for (int j = 0; j < i; ++j)
      g.max_offdiag_abs = std::max(g.max_offdiag_abs, std::abs(g.gram(i, j)));
  }
  g.n_samples = n_samples;
  g.seed = seed;
  return g;
}

SpectrumReport decomposition_residual(const FeatureMap& fm, std::int64_t n_samples,
                                      std::uint64_t seed, int cap, double band) {
  const Eigen::MatrixXd j = empirical_fim_explicit(fm, n_samples, seed, cap);
  const std::vector<BasisVector> basis = fm.d >= 2 ? full_basis(fm) : std::vector<BasisVector>{eig_v0(fm)};
  const Eigen::MatrixXd V = basis_matrix(basis);
  Eigen::VectorXd lam(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) lam[i] = basis[i].nominal_eigenvalue;

  SpectrumReport rep;
  rep.d = fm.d;
  rep.m = fm.m;
  rep.n_samples = n_samples;
  rep.seed = seed;
  rep.band = band;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j, Eigen::EigenvaluesOnly);
  rep.eigenvalues = es.eigenvalues().reverse();
  rep.min_eigenvalue = rep.eigenvalues[rep.eigenvalues.size() - 1];

  const double l1 = lambda_top(fm.d), l2 = lambda_second(), l3 = lambda_third(fm.d);
  const double nominals[4] = {l1, l2, l3, 0.0};
  rep.cluster.resize(rep.eigenvalues.size());
  for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
    const double ev = rep.eigenvalues[i];
    // Nearest nominal, ties toward the larger one (smaller index).
    int best = 0;
    for (int cand = 1; cand < 4; ++cand)
      if (std::abs(ev - nominals[cand]) < std::abs(ev - nominals[best])) best = cand;
    rep.cluster[i] = best;
    if (ev >= l1 * (1 - band) && ev <= l1 * (1 + band)) ++rep.count_top_band;
    if (ev >= l2 * (1 - band) && ev <= l2 * (1 + band)) ++rep.count_second_band;
    if (ev >= l3 * (1 - band) && ev <= l3 * (1 + band)) ++rep.count_third_band;
  }

  Eigen::MatrixXd residual = j;
  residual.noalias() -= V * lam.asDiagonal() * V.transpose();
  residual = 0.5 * (residual + residual.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(residual, Eigen::EigenvaluesOnly);
  rep.residual_opnorm = std::max(std::abs(er.eigenvalues()[0]),
                                 std::abs(er.eigenvalues()[er.eigenvalues().size() - 1]));
  return rep;
}

}  // namespace relufim
