#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "dprl/dataset.hpp"
#include "dprl/erm.hpp"

namespace dprl {

// First/second moments of the joint (x, y) sample, covariance unbiased.
struct GaussianSummary {
  Eigen::VectorXd mean;        // length p_x + p_y
  Eigen::MatrixXd covariance;  // (p_x + p_y) square
  std::int64_t count = 0;
  int p_x = 0;
  int p_y = 0;

  int joint_dim() const { return p_x + p_y; }
  void validate() const;

  Eigen::VectorXd mean_x() const { return mean.head(p_x); }
  Eigen::VectorXd mean_y() const { return mean.tail(p_y); }
  Eigen::MatrixXd sigma_xx() const { return covariance.topLeftCorner(p_x, p_x); }
  Eigen::MatrixXd sigma_yx() const {
    return covariance.bottomLeftCorner(p_y, p_x);
  }
};

GaussianSummary summarize(const Dataset& data);

// Affine predictor y = A x + b.
struct LinearModel {
  Eigen::MatrixXd weights;  // p_y x p_x
  Eigen::VectorXd bias;     // p_y

  Eigen::MatrixXd predict(const Eigen::MatrixXd& features) const;
};

// Same parameters laid out as a ThetaModel column block (weights on top,
// bias in the last row), so both trainers share one evaluation path.
ThetaModel to_theta(const LinearModel& model);

struct InnerSolution {
  double value = 0.0;   // worst-case second moment f(A)
  double xi = 0.0;      // optimal dual multiplier (+inf when rho = 0)
  double lambda = 0.0;  // value - tr(M Sigma M^T), the robustness premium
  double feasible_floor = 0.0;  // lambda_max(M^T M) = sigma_max(A)^2 + 1
};

// Worst-case residual second moment over the covariance ball of radius rho,
// reduced to a one-dimensional dual search in xi > ||M||^2 with
// M = [A  -I]. sigma must be positive semidefinite.
InnerSolution inner_dual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sigma,
                         double rho);

// Robustness premium lambda(A) = inner value minus the nominal moment;
// nonnegative, and exactly zero at rho = 0.
double lambda_reg(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sigma,
                  double rho);

// Gradient of A -> inner_dual(A, sigma, rho).value (envelope theorem).
Eigen::MatrixXd inner_dual_gradient(const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& sigma, double rho);

// Bias killing the mean residual: b = mean_y - A mean_x.
Eigen::VectorXd optimal_bias(const Eigen::MatrixXd& a,
                             const GaussianSummary& summary);

struct GaussDroConfig {
  std::int64_t max_iters = 1000;
  double tol = 1e-10;
  double armijo_c = 1e-4;
  std::int64_t max_backtracks = 60;
};

struct GaussDroResult {
  LinearModel model;
  double objective = 0.0;
  double xi = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;
};

// Minimizes the worst-case expected squared residual over the Gaussian
// ambiguity ball by gradient descent with Armijo backtracking, starting at
// the least-squares weights.
GaussDroResult train_gauss_dro(const GaussianSummary& summary, double rho,
                               const GaussDroConfig& config = {});
GaussDroResult train_gauss_dro(const Dataset& data, double rho,
                               const GaussDroConfig& config = {});

// Verifiable optimality certificate: with S = covariance^{1/2} and
// M = [A  -I], the block matrix
//   [ Z      xi S   0   ]
//   [ xi S   xi I   M^T ]
//   [ 0      M      I   ]
// must be positive semidefinite, and the linear objective
// xi (rho^2 - tr Sigma) + tr Z + |M mu + B|^2 reproduces the dual value.
struct SdpCertificate {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  double xi = 0.0;
  Eigen::MatrixXd z;
  double objective = 0.0;
};

struct CertificateCheck {
  bool feasible = false;
  double min_eigenvalue = 0.0;
  double objective = 0.0;  // recomputed from the certificate pieces
};

// Builds the equality-case certificate Z = xi^2 S (xi I - M^T M)^{-1} S at
// the inner optimum for (a, b); needs rho > 0.
SdpCertificate make_certificate(const Eigen::MatrixXd& a,
                                const Eigen::VectorXd& b,
                                const GaussianSummary& summary, double rho);

CertificateCheck check_sdp_certificate(const SdpCertificate& certificate,
                                       const GaussianSummary& summary,
                                       double rho);

}  // namespace dprl
