#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "relufim/eigenvectors.hpp"
#include "relufim/features.hpp"

namespace relufim {

/// Which eigenvector stands in for each family in the MAE / scatter
/// experiments.  The paper does not say which indices it used; defaults are
/// l = 1, gamma = 1, (alpha, beta) = (1, 2) and reports record the choice.
struct GroupReps {
  int l = 1;
  int gamma = 1;
  int alpha = 1;
  int beta = 2;
};

/// The experiment group identifiers as they appear on the CLI.
enum class ExpGroup { G1, G2, G3diag, G3offdiag };

std::string exp_group_name(ExpGroup g);
ExpGroup parse_exp_group(const std::string& name);  // throws on unknown name

/// N x d matrix of standard-normal inputs on the experiment stream.
Eigen::MatrixXd draw_experiment_inputs(int d, std::int64_t n, std::uint64_t seed);

BasisVector representative_vector(const FeatureMap& fm, ExpGroup g, const GroupReps& reps);

/// Leading-term limit value for the group's representative at one input.
double representative_limit(ExpGroup g, const GroupReps& reps, const Eigen::VectorXd& x, int d);

struct MaeCell {
  ExpGroup group;
  std::string index_label;
  double mae = 0.0;
  double bootstrap_se = 0.0;
  std::vector<double> abs_residuals;  // per input, retained for reporting
};

/// MAE = mean_i |F(x_i) - X(x_i)^T v| per requested group over the given
/// inputs (rows).  bootstrap_se is a 200-resample bootstrap standard error,
/// drawn deterministically from the bootstrap stream.
std::vector<MaeCell> mae_experiment(const FeatureMap& fm, const std::vector<ExpGroup>& groups,
                                    const GroupReps& reps, const Eigen::MatrixXd& inputs,
                                    std::uint64_t seed);

struct ScatterRow {
  ExpGroup group;
  std::string index_label;
  double theoretical = 0.0;
  double realized = 0.0;
};

std::vector<ScatterRow> scatter_experiment(const FeatureMap& fm,
                                           const std::vector<ExpGroup>& groups,
                                           const GroupReps& reps, const Eigen::MatrixXd& inputs);

}  // namespace relufim
