#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "dprl/dataset.hpp"

namespace dprl {

enum class LossKind { quadratic_linear, absolute_linear, logistic };

// Norm on the (x, y) space; the regularizer uses its dual (l2 is self-dual,
// l1 and linf are dual to each other).
enum class NormKind { l2, l1, linf };

struct LossSpec {
  LossKind kind = LossKind::quadratic_linear;
  NormKind norm = NormKind::l2;
  double x_bound = 0.0;  // X = max ||x|| over the feature set
  double y_bound = 0.0;  // Y = max |y| over the output set
  void validate() const;

  // Bounds for features confined to a box, under the chosen norm.
  static LossSpec for_box(LossKind kind, const FeatureBounds& bounds, int p_x,
                          double y_bound, NormKind norm);
  static LossSpec for_unit_box(LossKind kind, int p_x, NormKind norm);
};

// Affine model theta^T [x; 1] per output; column j holds the weights and
// trailing bias for output j.
struct ThetaModel {
  Eigen::MatrixXd theta;  // (p_x + 1) x p_y

  Eigen::Index feature_dim() const { return theta.rows() - 1; }
  Eigen::Index output_dim() const { return theta.cols(); }
};

enum class StepRule { constant, diminishing };

struct SolverConfig {
  std::int64_t max_iters = 200000;
  StepRule step_rule = StepRule::constant;
  double step = 0.0;  // <= 0 picks an automatic step size
  double tol = 1e-14;
  std::uint64_t seed = 0;
  bool record_trace = false;
};

struct TrainResult {
  ThetaModel model;
  double objective = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;
  std::vector<double> objective_trace;  // best-so-far, when recorded
};

double dual_norm(const Eigen::VectorXd& v, NormKind norm);

// Subgradient of v -> dual_norm(v). Ties in the linf dual are broken at the
// lowest index; the zero vector maps to the zero subgradient.
Eigen::VectorXd dual_norm_subgradient(const Eigen::VectorXd& v, NormKind norm);

// Lipschitz constant of the per-record loss in (x, y):
// quadratic (X+1+Y)|theta|*^2, absolute |theta|*, logistic (Y+X+2)|theta|*.
double lipschitz_constant(const LossSpec& spec, const Eigen::VectorXd& theta);

// Sample mean of the per-record loss, summed over outputs.
double empirical_loss(const Dataset& data, const LossSpec& spec,
                      const ThetaModel& model);

// Full regularized objective: empirical loss + rho * sum over outputs of the
// Lipschitz regularizer.
double regularized_objective(const Dataset& data, const LossSpec& spec,
                             double rho, const ThetaModel& model);

// Subgradient of the regularized objective for a single output column.
Eigen::VectorXd objective_subgradient(const Eigen::MatrixXd& design,
                                      const Eigen::VectorXd& outputs,
                                      const LossSpec& spec, double rho,
                                      const Eigen::VectorXd& theta);

// Minimizes the Lipschitz-regularized empirical objective by subgradient
// descent from theta = 0. Multiple outputs are trained independently.
TrainResult train_regularized(const Dataset& data, const LossSpec& spec,
                              double rho, const SolverConfig& config);

// Identical computation to empirical_loss, applied to held-out data.
double evaluate(const Dataset& data, const LossSpec& spec,
                const ThetaModel& model);

}  // namespace dprl
