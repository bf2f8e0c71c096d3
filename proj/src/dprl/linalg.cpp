#include "dprl/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "dprl/common.hpp"

namespace dprl {

namespace {
constexpr double kPsdDriftTolerance = 1e-10;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  require(m.rows() == m.cols(), ErrorCode::shape_mismatch,
          "matrix square root requires a square matrix");
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  Eigen::VectorXd vals = eig.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    require(vals(i) >= -kPsdDriftTolerance, ErrorCode::domain_error,
            "matrix is not positive semidefinite");
    if (vals(i) < 0.0) vals(i) = 0.0;
  }
  return eig.eigenvectors() * vals.cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  require(m.rows() == m.cols(), ErrorCode::shape_mismatch,
          "eigenvalues require a square matrix");
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  return eig.eigenvalues().minCoeff();
}

}  // namespace dprl
