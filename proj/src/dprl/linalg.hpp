#pragma once

#include <Eigen/Core>

namespace dprl {

// Symmetric PSD square root via eigendecomposition. Eigenvalues below
// -1e-10 are rejected (domain error); values in [-1e-10, 0] are clamped to 0
// to tolerate floating-point PSD drift.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m);

// Smallest eigenvalue of a symmetric matrix (the input is symmetrized first).
double min_eigenvalue(const Eigen::MatrixXd& m);

}  // namespace dprl
