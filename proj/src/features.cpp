#include "relufim/features.hpp"

#include <cmath>
#include <stdexcept>

namespace relufim {

FeatureMap generate_weights(int d, int m, std::uint64_t seed) {
  if (d < 1 || m < 1) throw std::invalid_argument("generate_weights: d and m must be positive");
  FeatureMap fm;
  fm.d = d;
  fm.m = m;
  fm.seed = seed;
  fm.W.resize(d, m);
  const rng::CounterStream s(seed, rng::Stream::weights);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  // Column-major fill matches the counter layout j*d + i exactly.
  s.normal_fill(fm.W.data(), 0, static_cast<std::uint64_t>(d) * m);
  fm.W *= scale;
  return fm;
}

Eigen::VectorXd activate(const FeatureMap& fm, const Eigen::VectorXd& x) {
  if (x.size() != fm.d) throw std::invalid_argument("activate: x has wrong dimension");
  return (fm.W.transpose() * x).cwiseMax(0.0);
}

Eigen::MatrixXd activate_rows(const FeatureMap& fm, const Eigen::MatrixXd& xs) {
  if (xs.cols() != fm.d) throw std::invalid_argument("activate_rows: inputs have wrong dimension");
  return (xs * fm.W).cwiseMax(0.0);
}

double eval_basis(const FeatureMap& fm, const Eigen::VectorXd& v, const Eigen::VectorXd& x) {
  if (v.size() != fm.m) throw std::invalid_argument("eval_basis: v has wrong length");
  return activate(fm, x).dot(v);
}

}  // namespace relufim
