#include "dprl/erm.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

namespace dprl {

void LossSpec::validate() const {
  require(std::isfinite(x_bound) && x_bound >= 0.0, ErrorCode::invalid_argument,
          "X bound must be a nonnegative real");
  require(std::isfinite(y_bound) && y_bound >= 0.0, ErrorCode::invalid_argument,
          "Y bound must be a nonnegative real");
}

LossSpec LossSpec::for_box(LossKind kind, const FeatureBounds& bounds, int p_x,
                           double y_bound, NormKind norm) {
  bounds.validate();
  require(p_x >= 1, ErrorCode::invalid_argument, "p_x must be at least 1");
  const double m = std::max(std::abs(bounds.lower), std::abs(bounds.upper));
  LossSpec spec;
  spec.kind = kind;
  spec.norm = norm;
  spec.y_bound = y_bound;
  switch (norm) {
    case NormKind::l2:
      spec.x_bound = m * std::sqrt(static_cast<double>(p_x));
      break;
    case NormKind::l1:
      spec.x_bound = m * static_cast<double>(p_x);
      break;
    case NormKind::linf:
      spec.x_bound = m;
      break;
  }
  return spec;
}

LossSpec LossSpec::for_unit_box(LossKind kind, int p_x, NormKind norm) {
  return for_box(kind, FeatureBounds{0.0, 1.0}, p_x, 1.0, norm);
}

double dual_norm(const Eigen::VectorXd& v, NormKind norm) {
  switch (norm) {
    case NormKind::l2:
      return v.norm();
    case NormKind::l1:
      return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    case NormKind::linf:
      return v.cwiseAbs().sum();
  }
  return 0.0;
}

Eigen::VectorXd dual_norm_subgradient(const Eigen::VectorXd& v,
                                      NormKind norm) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(v.size());
  switch (norm) {
    case NormKind::l2: {
      const double n = v.norm();
      if (n > 0.0) g = v / n;
      break;
    }
    case NormKind::l1: {
      // dual is linf; lowest index attaining the max breaks ties
      Eigen::Index arg = 0;
      double best = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > best) {
          best = std::abs(v(i));
          arg = i;
        }
      }
      if (best > 0.0) g(arg) = v(arg) > 0.0 ? 1.0 : -1.0;
      break;
    }
    case NormKind::linf: {
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) > 0.0)
          g(i) = 1.0;
        else if (v(i) < 0.0)
          g(i) = -1.0;
      }
      break;
    }
  }
  return g;
}

namespace {

double regularizer_coefficient(const LossSpec& spec) {
  switch (spec.kind) {
    case LossKind::quadratic_linear:
      return spec.x_bound + 1.0 + spec.y_bound;
    case LossKind::absolute_linear:
      return 1.0;
    case LossKind::logistic:
      return spec.y_bound + spec.x_bound + 2.0;
  }
  return 0.0;
}

double regularizer_value(const LossSpec& spec, const Eigen::VectorXd& theta) {
  const double dn = dual_norm(theta, spec.norm);
  const double c = regularizer_coefficient(spec);
  return spec.kind == LossKind::quadratic_linear ? c * dn * dn : c * dn;
}

Eigen::VectorXd regularizer_subgradient(const LossSpec& spec,
                                        const Eigen::VectorXd& theta) {
  const double c = regularizer_coefficient(spec);
  Eigen::VectorXd g = dual_norm_subgradient(theta, spec.norm);
  if (spec.kind == LossKind::quadratic_linear)
    return (2.0 * c * dual_norm(theta, spec.norm)) * g;
  return c * g;
}

double softplus(double u) {
  return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double pointwise_loss(LossKind kind, double u, double y) {
  switch (kind) {
    case LossKind::quadratic_linear: {
      const double r = u - y;
      return 0.5 * r * r;
    }
    case LossKind::absolute_linear:
      return std::abs(u - y);
    case LossKind::logistic:
      // cross-entropy of sigmoid(u) against y, in the stable form
      return softplus(u) - y * u;
  }
  return 0.0;
}

double pointwise_slope(LossKind kind, double u, double y) {
  switch (kind) {
    case LossKind::quadratic_linear:
      return u - y;
    case LossKind::absolute_linear: {
      const double r = u - y;
      if (r > 0.0) return 1.0;
      if (r < 0.0) return -1.0;
      return 0.0;
    }
    case LossKind::logistic:
      return sigmoid(u) - y;
  }
  return 0.0;
}

void check_logistic_labels(const LossSpec& spec, const Eigen::MatrixXd& y) {
  if (spec.kind != LossKind::logistic) return;
  require(((y.array() == 0.0) || (y.array() == 1.0)).all(),
          ErrorCode::invalid_argument,
          "logistic loss requires outputs in {0, 1}");
}

Eigen::MatrixXd design_matrix(const Dataset& data) {
  Eigen::MatrixXd z(data.rows(), data.feature_dim() + 1);
  z.leftCols(data.feature_dim()) = data.features();
  z.col(data.feature_dim()).setOnes();
  return z;
}

void check_model_shape(const Dataset& data, const ThetaModel& model) {
  require(model.theta.rows() == data.feature_dim() + 1 &&
              model.theta.cols() == data.output_dim(),
          ErrorCode::shape_mismatch,
          "model shape does not match the dataset");
  require(model.theta.allFinite(), ErrorCode::invalid_argument,
          "model parameters must be finite");
}

double column_loss(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                   LossKind kind, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd u = design * theta;
  double total = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    total += pointwise_loss(kind, u(i), y(i));
  return total / static_cast<double>(u.size());
}

struct ColumnResult {
  Eigen::VectorXd theta;
  double objective = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;
};

ColumnResult train_column(const Eigen::MatrixXd& design,
                          const Eigen::VectorXd& y, const LossSpec& spec,
                          double rho, const SolverConfig& config,
                          std::vector<double>* trace) {
  const Eigen::Index dim = design.cols();
  const double n = static_cast<double>(design.rows());

  double step = config.step;
  if (step <= 0.0) {
    // Automatic step: inverse curvature surrogate for the smooth pieces, a
    // unit-scale base for the nonsmooth ones.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        design.transpose() * design / n);
    const double lam_max = eig.eigenvalues().maxCoeff();
    const double c = regularizer_coefficient(spec);
    switch (spec.kind) {
      case LossKind::quadratic_linear:
        step = 1.0 / (lam_max + 2.0 * rho * c);
        break;
      case LossKind::logistic:
        step = 1.0 / (0.25 * lam_max + rho * c + 1e-12);
        break;
      case LossKind::absolute_linear:
        step = 1.0 / (std::sqrt(lam_max) + rho * c + 1e-12);
        break;
    }
  }

  auto objective_at = [&](const Eigen::VectorXd& theta) {
    return column_loss(design, y, spec.kind, theta) +
           rho * regularizer_value(spec, theta);
  };

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd best_theta = theta;
  double best = objective_at(theta);
  if (trace) trace->push_back(best);

  const int patience = config.step_rule == StepRule::constant ? 16 : 512;
  int stall = 0;
  bool converged = false;
  std::int64_t t = 0;
  for (t = 1; t <= config.max_iters; ++t) {
    Eigen::VectorXd slope(design.rows());
    const Eigen::VectorXd u = design * theta;
    for (Eigen::Index i = 0; i < u.size(); ++i)
      slope(i) = pointwise_slope(spec.kind, u(i), y(i));
    Eigen::VectorXd g = design.transpose() * slope / n;
    if (rho > 0.0) g += rho * regularizer_subgradient(spec, theta);

    const double eta = config.step_rule == StepRule::constant
                           ? step
                           : step / std::sqrt(static_cast<double>(t));
    theta -= eta * g;

    const double obj = objective_at(theta);
    if (obj < best - config.tol * std::max(1.0, std::abs(best))) {
      best = obj;
      best_theta = theta;
      stall = 0;
    } else {
      ++stall;
      if (obj < best) {
        best = obj;
        best_theta = theta;
      }
    }
    if (trace) trace->push_back(best);
    if (stall >= patience) {
      converged = true;
      break;
    }
  }

  return {std::move(best_theta), best, converged, std::min(t, config.max_iters)};
}

}  // namespace

double lipschitz_constant(const LossSpec& spec, const Eigen::VectorXd& theta) {
  spec.validate();
  require(theta.allFinite(), ErrorCode::invalid_argument,
          "theta must be finite");
  return regularizer_value(spec, theta);
}

double empirical_loss(const Dataset& data, const LossSpec& spec,
                      const ThetaModel& model) {
  spec.validate();
  check_model_shape(data, model);
  check_logistic_labels(spec, data.outputs());
  const Eigen::MatrixXd design = design_matrix(data);
  double total = 0.0;
  for (Eigen::Index j = 0; j < data.output_dim(); ++j)
    total += column_loss(design, data.outputs().col(j), spec.kind,
                         model.theta.col(j));
  return total;
}

double regularized_objective(const Dataset& data, const LossSpec& spec,
                             double rho, const ThetaModel& model) {
  require(rho >= 0.0, ErrorCode::invalid_argument, "rho must be nonnegative");
  double obj = empirical_loss(data, spec, model);
  for (Eigen::Index j = 0; j < model.output_dim(); ++j)
    obj += rho * regularizer_value(spec, model.theta.col(j));
  return obj;
}

Eigen::VectorXd objective_subgradient(const Eigen::MatrixXd& design,
                                      const Eigen::VectorXd& outputs,
                                      const LossSpec& spec, double rho,
                                      const Eigen::VectorXd& theta) {
  spec.validate();
  require(design.rows() == outputs.size() && design.cols() == theta.size(),
          ErrorCode::shape_mismatch, "inconsistent design/output/theta shapes");
  const double n = static_cast<double>(design.rows());
  const Eigen::VectorXd u = design * theta;
  Eigen::VectorXd slope(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    slope(i) = pointwise_slope(spec.kind, u(i), outputs(i));
  Eigen::VectorXd g = design.transpose() * slope / n;
  if (rho > 0.0) g += rho * regularizer_subgradient(spec, theta);
  return g;
}

TrainResult train_regularized(const Dataset& data, const LossSpec& spec,
                              double rho, const SolverConfig& config) {
  spec.validate();
  require(rho >= 0.0 && std::isfinite(rho), ErrorCode::invalid_argument,
          "rho must be a nonnegative real");
  require(config.max_iters >= 1, ErrorCode::invalid_argument,
          "max_iters must be at least 1");
  require(config.tol > 0.0, ErrorCode::invalid_argument,
          "tol must be positive");
  check_logistic_labels(spec, data.outputs());

  const Eigen::MatrixXd design = design_matrix(data);

  TrainResult result;
  result.model.theta.resize(data.feature_dim() + 1, data.output_dim());
  result.converged = true;
  for (Eigen::Index j = 0; j < data.output_dim(); ++j) {
    std::vector<double>* trace =
        (config.record_trace && j == 0) ? &result.objective_trace : nullptr;
    ColumnResult col = train_column(design, data.outputs().col(j), spec, rho,
                                    config, trace);
    result.model.theta.col(j) = col.theta;
    result.objective += col.objective;
    result.converged = result.converged && col.converged;
    result.iterations = std::max(result.iterations, col.iterations);
  }
  return result;
}

double evaluate(const Dataset& data, const LossSpec& spec,
                const ThetaModel& model) {
  return empirical_loss(data, spec, model);
}

}  // namespace dprl
