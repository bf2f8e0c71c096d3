#pragma once

#include <Eigen/Core>
#include <functional>
#include <random>

#include "dprl/dataset.hpp"

// Expects expr to throw dprl::Error with the given code.
#define EXPECT_DPRL_ERROR(expr, expected_code)                       \
  do {                                                               \
    try {                                                            \
      (void)(expr);                                                  \
      ADD_FAILURE() << "expected a dprl::Error from " #expr;         \
    } catch (const dprl::Error& e_) {                                \
      EXPECT_TRUE(e_.code() == (expected_code)) << e_.what();        \
    }                                                                \
  } while (0)

namespace dprl::testutil {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20250817);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(-scale, scale);
  return m;
}

inline Eigen::MatrixXd random_psd(Eigen::Index n, double scale = 1.0) {
  const Eigen::MatrixXd a = random_matrix(n, n, scale);
  return a * a.transpose() / static_cast<double>(n) +
         1e-8 * Eigen::MatrixXd::Identity(n, n);
}

// Clean dataset: uniform features in the unit box, outputs linear in the
// features plus mild noise.
inline Dataset random_clean_dataset(Eigen::Index n, Eigen::Index p_x,
                                    Eigen::Index p_y) {
  Eigen::MatrixXd features(n, p_x);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p_x; ++j) features(i, j) = uniform(0.0, 1.0);
  const Eigen::MatrixXd weights = random_matrix(p_x, p_y);
  Eigen::MatrixXd outputs = features * weights;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p_y; ++j)
      outputs(i, j) += uniform(-0.05, 0.05);
  return Dataset(std::move(features), std::move(outputs),
                 FeatureBounds{0.0, 1.0});
}

// Central difference d/dx f(x) with step h.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace dprl::testutil
