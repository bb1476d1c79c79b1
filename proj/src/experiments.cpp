#include "relufim/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "relufim/limits.hpp"
#include "relufim/mc.hpp"

namespace relufim {

std::string exp_group_name(ExpGroup g) {
  switch (g) {
    case ExpGroup::G1: return "G1";
    case ExpGroup::G2: return "G2";
    case ExpGroup::G3diag: return "G3diag";
    case ExpGroup::G3offdiag: return "G3offdiag";
  }
  return "?";
}

ExpGroup parse_exp_group(const std::string& name) {
  if (name == "G1") return ExpGroup::G1;
  if (name == "G2") return ExpGroup::G2;
  if (name == "G3diag") return ExpGroup::G3diag;
  if (name == "G3offdiag") return ExpGroup::G3offdiag;
  throw std::invalid_argument("unknown group '" + name + "' (expected G1|G2|G3diag|G3offdiag)");
}

Eigen::MatrixXd draw_experiment_inputs(int d, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("draw_experiment_inputs: n_inputs >= 1");
  const rng::CounterStream s(seed, rng::Stream::experiment_inputs);
  return mc::gaussian_rows(s, 0, n, d);
}

BasisVector representative_vector(const FeatureMap& fm, ExpGroup g, const GroupReps& reps) {
  switch (g) {
    case ExpGroup::G1: return eig_v0(fm);
    case ExpGroup::G2: return eig_vl(fm, reps.l);
    case ExpGroup::G3diag: return eig_v_gamma(fm, reps.gamma);
    case ExpGroup::G3offdiag: return eig_v_ab(fm, reps.alpha, reps.beta);
  }
  throw std::logic_error("representative_vector: unknown group");
}

double representative_limit(ExpGroup g, const GroupReps& reps, const Eigen::VectorXd& x, int d) {
  switch (g) {
    case ExpGroup::G1: return limit_F0(x, d);
    case ExpGroup::G2: return limit_Fl(x, reps.l);
    case ExpGroup::G3diag: return x.norm() == 0.0 ? 0.0 : limit_Fdiag(x, reps.gamma, d);
    case ExpGroup::G3offdiag:
      return x.norm() == 0.0 ? 0.0 : limit_Foffdiag(x, reps.alpha, reps.beta, d);
  }
  throw std::logic_error("representative_limit: unknown group");
}

namespace {

std::string index_label(ExpGroup g, const GroupReps& reps) {
  switch (g) {
    case ExpGroup::G1: return "0";
    case ExpGroup::G2: return std::to_string(reps.l);
    case ExpGroup::G3diag: return std::to_string(reps.gamma);
    case ExpGroup::G3offdiag: return std::to_string(reps.alpha) + "-" + std::to_string(reps.beta);
  }
  return "?";
}

}  // namespace

std::vector<MaeCell> mae_experiment(const FeatureMap& fm, const std::vector<ExpGroup>& groups,
                                    const GroupReps& reps, const Eigen::MatrixXd& inputs,
                                    std::uint64_t seed) {
  if (groups.empty()) throw std::invalid_argument("mae_experiment: groups must be non-empty");
  const auto n = inputs.rows();
  const Eigen::MatrixXd acts = activate_rows(fm, inputs);
  const rng::CounterStream boot(seed, rng::Stream::bootstrap);
  constexpr int kBootstrap = 200;

  std::vector<MaeCell> cells;
  for (ExpGroup g : groups) {
    const BasisVector bv = representative_vector(fm, g, reps);
    const Eigen::VectorXd realized = acts * bv.v;
    MaeCell cell;
    cell.group = g;
    cell.index_label = index_label(g, reps);
    cell.abs_residuals.resize(n);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f = representative_limit(g, reps, inputs.row(i).transpose(), fm.d);
      cell.abs_residuals[i] = std::abs(f - realized[i]);
      sum += cell.abs_residuals[i];
    }
    cell.mae = sum / double(n);
    double bsum = 0.0, bsum2 = 0.0;
    for (int b = 0; b < kBootstrap; ++b) {
      double s = 0.0;
      for (Eigen::Index t = 0; t < n; ++t) {
        const auto idx = boot.bits(static_cast<std::uint64_t>(b) * n + t) % n;
        s += cell.abs_residuals[idx];
      }
      const double mean = s / double(n);
      bsum += mean;
      bsum2 += mean * mean;
    }
    cell.bootstrap_se = std::sqrt(std::max(0.0, bsum2 / kBootstrap - (bsum / kBootstrap) * (bsum / kBootstrap)));
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::vector<ScatterRow> scatter_experiment(const FeatureMap& fm,
                                           const std::vector<ExpGroup>& groups,
                                           const GroupReps& reps, const Eigen::MatrixXd& inputs) {
  if (groups.empty()) throw std::invalid_argument("scatter_experiment: groups must be non-empty");
  const Eigen::MatrixXd acts = activate_rows(fm, inputs);
  std::vector<ScatterRow> rows;
  rows.reserve(static_cast<std::size_t>(inputs.rows()) * groups.size());
  for (ExpGroup g : groups) {
    const BasisVector bv = representative_vector(fm, g, reps);
    const Eigen::VectorXd realized = acts * bv.v;
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
      ScatterRow r;
      r.group = g;
      r.index_label = index_label(g, reps);
      r.theoretical = representative_limit(g, reps, inputs.row(i).transpose(), fm.d);
      r.realized = realized[i];
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace relufim
