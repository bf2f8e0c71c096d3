#include "dprl/gauss_dro.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "dprl/linalg.hpp"

namespace dprl {

void GaussianSummary::validate() const {
  require(p_x >= 1 && p_y >= 1, ErrorCode::invalid_argument,
          "summary dimensions must be positive");
  require(mean.size() == joint_dim(), ErrorCode::shape_mismatch,
          "summary mean has the wrong length");
  require(covariance.rows() == joint_dim() &&
              covariance.cols() == joint_dim(),
          ErrorCode::shape_mismatch, "summary covariance has the wrong shape");
  require(mean.allFinite() && covariance.allFinite(),
          ErrorCode::invalid_argument, "summary moments must be finite");
  require(covariance.isApprox(covariance.transpose(), 1e-10),
          ErrorCode::invalid_argument, "summary covariance must be symmetric");
}

GaussianSummary summarize(const Dataset& data) {
  require(data.rows() >= 2, ErrorCode::insufficient_data,
          "at least two records are needed for an unbiased covariance");
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.feature_dim() + data.output_dim();
  Eigen::MatrixXd joint(n, p);
  joint.leftCols(data.feature_dim()) = data.features();
  joint.rightCols(data.output_dim()) = data.outputs();

  GaussianSummary summary;
  summary.p_x = static_cast<int>(data.feature_dim());
  summary.p_y = static_cast<int>(data.output_dim());
  summary.count = n;
  summary.mean = joint.colwise().mean();
  const Eigen::MatrixXd centered = joint.rowwise() - summary.mean.transpose();
  summary.covariance =
      centered.transpose() * centered / static_cast<double>(n - 1);
  summary.covariance =
      ((summary.covariance + summary.covariance.transpose()) / 2.0).eval();
  return summary;
}

Eigen::MatrixXd LinearModel::predict(const Eigen::MatrixXd& features) const {
  require(features.cols() == weights.cols(), ErrorCode::shape_mismatch,
          "feature dimension does not match the model");
  return (features * weights.transpose()).rowwise() + bias.transpose();
}

ThetaModel to_theta(const LinearModel& model) {
  ThetaModel theta;
  theta.theta.resize(model.weights.cols() + 1, model.weights.rows());
  theta.theta.topRows(model.weights.cols()) = model.weights.transpose();
  theta.theta.bottomRows(1) = model.bias.transpose();
  return theta;
}

namespace {

// Residual map z = (x, y) -> A x - y.
Eigen::MatrixXd residual_map(const Eigen::MatrixXd& a) {
  const Eigen::Index p_y = a.rows();
  const Eigen::Index p = a.cols() + p_y;
  Eigen::MatrixXd m(p_y, p);
  m.leftCols(a.cols()) = a;
  m.rightCols(p_y) = -Eigen::MatrixXd::Identity(p_y, p_y);
  return m;
}

void check_inner_inputs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sigma,
                        double rho) {
  require(a.rows() >= 1 && a.cols() >= 1, ErrorCode::invalid_argument,
          "weight matrix must be nonempty");
  require(a.allFinite(), ErrorCode::domain_error,
          "weight matrix must be finite");
  const Eigen::Index p = a.rows() + a.cols();
  require(sigma.rows() == p && sigma.cols() == p, ErrorCode::shape_mismatch,
          "covariance must match the joint dimension");
  require(sigma.allFinite(), ErrorCode::invalid_argument,
          "covariance must be finite");
  require(sigma.isApprox(sigma.transpose(), 1e-8), ErrorCode::invalid_argument,
          "covariance must be symmetric");
  require(std::isfinite(rho) && rho >= 0.0, ErrorCode::invalid_argument,
          "rho must be a nonnegative real");
}

struct InnerState {
  InnerSolution solution;
  Eigen::MatrixXd m;
  Eigen::MatrixXd u;        // eigenvectors of M^T M
  Eigen::VectorXd d;        // eigenvalues of M^T M, ascending
  Eigen::VectorXd s;        // diag(U^T Sigma U), clamped at zero
  double nominal = 0.0;     // tr(M Sigma M^T)
};

// Dual objective g(xi) = rho^2 xi + nominal + sum_i s_i d_i^2 / (xi - d_i),
// strictly convex on xi > d_max; the minimizer solves g'(xi) = 0.
InnerState solve_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sigma,
                       double rho) {
  check_inner_inputs(a, sigma, rho);
  InnerState state;
  state.m = residual_map(a);
  const Eigen::MatrixXd sym = (sigma + sigma.transpose()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      state.m.transpose() * state.m);
  require(eig.info() == Eigen::Success, ErrorCode::domain_error,
          "eigendecomposition failed");
  state.u = eig.eigenvectors();
  state.d = eig.eigenvalues().cwiseMax(0.0);
  state.s = (state.u.transpose() * sym * state.u).diagonal().cwiseMax(0.0);
  state.nominal = (state.s.array() * state.d.array()).sum();
  const double floor = state.d.maxCoeff();

  if (rho == 0.0) {
    state.solution = {state.nominal, std::numeric_limits<double>::infinity(),
                      0.0, floor};
    return state;
  }

  const Eigen::VectorXd pole = state.s.array() * state.d.array().square();
  const double pole_total = pole.sum();
  const double d_max = floor;
  if (pole_total <= 0.0) {
    // No residual variance anywhere: the multiplier sits on the spectral floor.
    state.solution = {rho * rho * d_max + state.nominal, d_max,
                      rho * rho * d_max, floor};
    return state;
  }

  auto slope = [&](double xi) {
    double acc = rho * rho;
    for (Eigen::Index i = 0; i < pole.size(); ++i) {
      if (pole(i) > 0.0) {
        const double gap = xi - state.d(i);
        acc -= pole(i) / (gap * gap);
      }
    }
    return acc;
  };

  double lo = d_max * (1.0 + 1e-12) + 1e-300;
  double hi = d_max + std::sqrt(pole_total) / rho;
  if (slope(lo) >= 0.0) {
    hi = lo;  // root pinched against the floor
  } else {
    while (slope(hi) < 0.0) hi = d_max + (hi - d_max) * 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (slope(mid) < 0.0 ? lo : hi) = mid;
    }
  }
  const double xi = 0.5 * (lo + hi);

  double value = rho * rho * xi + state.nominal;
  for (Eigen::Index i = 0; i < pole.size(); ++i)
    if (pole(i) > 0.0) value += pole(i) / (xi - state.d(i));
  state.solution = {value, xi, std::max(value - state.nominal, 0.0), floor};
  return state;
}

Eigen::MatrixXd gradient_from_state(const InnerState& state,
                                    const Eigen::MatrixXd& sigma,
                                    Eigen::Index p_x) {
  const Eigen::MatrixXd sym = (sigma + sigma.transpose()) / 2.0;
  if (!std::isfinite(state.solution.xi)) {
    // rho = 0: f(A) = tr(M Sigma M^T) exactly.
    return 2.0 * (state.m * sym).leftCols(p_x);
  }
  const Eigen::VectorXd inv_gap =
      (state.solution.xi - state.d.array()).inverse();
  const Eigen::MatrixXd resolvent =
      state.u * inv_gap.asDiagonal() * state.u.transpose();
  const double xi2 = state.solution.xi * state.solution.xi;
  return (2.0 * xi2) * (state.m * resolvent * sym * resolvent).leftCols(p_x);
}

Eigen::MatrixXd least_squares_weights(const GaussianSummary& summary) {
  Eigen::MatrixXd sxx = summary.sigma_xx();
  sxx.diagonal().array() += 1e-12;  // keep degenerate samples solvable
  return sxx.ldlt().solve(summary.sigma_yx().transpose()).transpose();
}

}  // namespace

InnerSolution inner_dual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sigma,
                         double rho) {
  return solve_inner(a, sigma, rho).solution;
}

double lambda_reg(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sigma,
                  double rho) {
  return solve_inner(a, sigma, rho).solution.lambda;
}

Eigen::MatrixXd inner_dual_gradient(const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& sigma, double rho) {
  const InnerState state = solve_inner(a, sigma, rho);
  return gradient_from_state(state, sigma, a.cols());
}

Eigen::VectorXd optimal_bias(const Eigen::MatrixXd& a,
                             const GaussianSummary& summary) {
  summary.validate();
  require(a.rows() == summary.p_y && a.cols() == summary.p_x,
          ErrorCode::shape_mismatch, "weights do not match the summary");
  return summary.mean_y() - a * summary.mean_x();
}

GaussDroResult train_gauss_dro(const GaussianSummary& summary, double rho,
                               const GaussDroConfig& config) {
  summary.validate();
  require(std::isfinite(rho) && rho >= 0.0, ErrorCode::invalid_argument,
          "rho must be a nonnegative real");
  require(config.max_iters >= 1 && config.max_backtracks >= 1,
          ErrorCode::invalid_argument, "iteration limits must be positive");
  require(config.tol > 0.0 && config.armijo_c > 0.0 && config.armijo_c < 1.0,
          ErrorCode::invalid_argument, "invalid solver tolerances");

  GaussDroResult result;
  Eigen::MatrixXd a = least_squares_weights(summary);

  if (rho == 0.0) {
    // The nominal objective tr(M Sigma M^T) is minimized in closed form.
    const InnerState state = solve_inner(a, summary.covariance, 0.0);
    result.model = {a, optimal_bias(a, summary)};
    result.objective = state.solution.value;
    result.xi = state.solution.xi;
    result.converged = true;
    result.iterations = 0;
    return result;
  }

  InnerState state = solve_inner(a, summary.covariance, rho);
  Eigen::MatrixXd grad =
      gradient_from_state(state, summary.covariance, summary.p_x);
  double eta = 1.0;
  std::int64_t it = 0;
  for (it = 0; it < config.max_iters; ++it) {
    const double scale = std::max(1.0, std::abs(state.solution.value));
    if (grad.norm() <= config.tol * scale) {
      result.converged = true;
      break;
    }
    eta = std::min(eta * 2.0, 1e8);
    bool accepted = false;
    for (std::int64_t bt = 0; bt < config.max_backtracks; ++bt) {
      const Eigen::MatrixXd trial = a - eta * grad;
      const InnerState trial_state =
          solve_inner(trial, summary.covariance, rho);
      if (trial_state.solution.value <=
          state.solution.value -
              config.armijo_c * eta * grad.squaredNorm()) {
        a = trial;
        state = trial_state;
        accepted = true;
        break;
      }
      eta /= 2.0;
    }
    if (!accepted) {
      // Step collapsed: no descent direction at working precision.
      result.converged = grad.norm() <= std::sqrt(config.tol) * scale;
      break;
    }
    grad = gradient_from_state(state, summary.covariance, summary.p_x);
  }

  result.model = {a, optimal_bias(a, summary)};
  result.objective = state.solution.value;
  result.xi = state.solution.xi;
  result.iterations = it;
  return result;
}

GaussDroResult train_gauss_dro(const Dataset& data, double rho,
                               const GaussDroConfig& config) {
  return train_gauss_dro(summarize(data), rho, config);
}

SdpCertificate make_certificate(const Eigen::MatrixXd& a,
                                const Eigen::VectorXd& b,
                                const GaussianSummary& summary, double rho) {
  summary.validate();
  require(rho > 0.0 && std::isfinite(rho), ErrorCode::invalid_argument,
          "a certificate needs rho > 0");
  require(a.rows() == summary.p_y && a.cols() == summary.p_x &&
              b.size() == summary.p_y,
          ErrorCode::shape_mismatch, "model does not match the summary");

  const InnerState state = solve_inner(a, summary.covariance, rho);
  const double xi = state.solution.xi;
  const Eigen::MatrixXd root = psd_sqrt(summary.covariance);
  const Eigen::VectorXd inv_gap = (xi - state.d.array()).inverse();
  const Eigen::MatrixXd resolvent =
      state.u * inv_gap.asDiagonal() * state.u.transpose();

  SdpCertificate cert;
  cert.a = a;
  cert.b = b;
  cert.xi = xi;
  cert.z = (xi * xi) * root * resolvent * root;
  cert.z = ((cert.z + cert.z.transpose()) / 2.0).eval();
  const Eigen::VectorXd mean_residual =
      state.m * summary.mean + b;
  cert.objective = xi * (rho * rho - summary.covariance.trace()) +
                   cert.z.trace() + mean_residual.squaredNorm();
  return cert;
}

CertificateCheck check_sdp_certificate(const SdpCertificate& certificate,
                                       const GaussianSummary& summary,
                                       double rho) {
  summary.validate();
  require(certificate.a.rows() == summary.p_y &&
              certificate.a.cols() == summary.p_x &&
              certificate.b.size() == summary.p_y,
          ErrorCode::shape_mismatch, "model does not match the summary");
  const Eigen::Index p = summary.joint_dim();
  require(certificate.z.rows() == p && certificate.z.cols() == p,
          ErrorCode::shape_mismatch, "certificate block has the wrong shape");
  require(std::isfinite(certificate.xi) && certificate.xi >= 0.0,
          ErrorCode::invalid_argument, "certificate multiplier must be finite");

  const Eigen::MatrixXd m = residual_map(certificate.a);
  const Eigen::MatrixXd root = psd_sqrt(summary.covariance);
  const Eigen::Index p_y = summary.p_y;
  const Eigen::Index dim = 2 * p + p_y;

  Eigen::MatrixXd lmi = Eigen::MatrixXd::Zero(dim, dim);
  lmi.topLeftCorner(p, p) = certificate.z;
  lmi.block(0, p, p, p) = certificate.xi * root;
  lmi.block(p, 0, p, p) = certificate.xi * root;
  lmi.block(p, p, p, p) =
      certificate.xi * Eigen::MatrixXd::Identity(p, p);
  lmi.block(p, 2 * p, p, p_y) = m.transpose();
  lmi.block(2 * p, p, p_y, p) = m;
  lmi.bottomRightCorner(p_y, p_y) = Eigen::MatrixXd::Identity(p_y, p_y);

  CertificateCheck check;
  check.min_eigenvalue = min_eigenvalue(lmi);
  check.feasible = check.min_eigenvalue >= -1e-8;
  const Eigen::VectorXd mean_residual = m * summary.mean + certificate.b;
  check.objective = certificate.xi *
                        (rho * rho - summary.covariance.trace()) +
                    certificate.z.trace() + mean_residual.squaredNorm();
  return check;
}

}  // namespace dprl
