#include "dprl/ambiguity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dprl/linalg.hpp"

namespace dprl {

void ConcentrationConfig::validate() const {
  require(c1 > 0.0 && c2 > 0.0, ErrorCode::invalid_argument,
          "concentration constants c1, c2 must be positive");
  require(a > 1.0, ErrorCode::invalid_argument,
          "light-tail exponent a must exceed 1");
}

double zeta(double gamma, std::int64_t n, int p,
            const ConcentrationConfig& config) {
  if (config.big_data) return 0.0;
  config.validate();
  require(gamma > 0.0 && gamma < 1.0, ErrorCode::invalid_argument,
          "gamma must lie in (0, 1)");
  require(n >= 1, ErrorCode::invalid_argument, "n must be at least 1");
  require(p >= 1, ErrorCode::invalid_argument, "p must be at least 1");
  require(p != 2, ErrorCode::unsupported_dimension,
          "the concentration bound excludes p = 2");

  const double t = std::log(config.c1 / gamma);
  if (t <= 0.0) return 0.0;  // tail bound already vacuous at radius 0
  const double exponent =
      static_cast<double>(n) >= t / config.c2
          ? 1.0 / static_cast<double>(std::max(p, 2))
          : 1.0 / config.a;
  return std::pow(t / (config.c2 * static_cast<double>(n)), exponent);
}

Radius compute_radius(MechanismKind kind, const PrivacyBudget& budget, int p,
                      double delta_sens, double beta, std::int64_t n,
                      const ConcentrationConfig& config) {
  budget.validate();
  require(p >= 1, ErrorCode::invalid_argument, "p must be at least 1");
  require(delta_sens > 0.0, ErrorCode::invalid_argument,
          "sensitivity must be positive");
  require(beta > 0.0 && beta < 1.0, ErrorCode::invalid_argument,
          "beta must lie in (0, 1)");

  Radius r;
  r.zeta_part = zeta(beta, n, p, config);
  const double dp = static_cast<double>(p);
  switch (kind) {
    case MechanismKind::laplace:
      r.privacy_part = std::sqrt(2.0 * dp) * delta_sens / budget.epsilon;
      break;
    case MechanismKind::gaussian:
      require(budget.delta > 0.0, ErrorCode::invalid_argument,
              "the Gaussian mechanism requires delta > 0");
      r.privacy_part = std::sqrt(2.0 * dp * std::log(1.25 / budget.delta)) *
                       delta_sens / budget.epsilon;
      break;
  }
  r.rho = r.zeta_part + r.privacy_part;
  return r;
}

namespace {

// Minimum-cost perfect matching on a dense m x m cost matrix by shortest
// augmenting paths with potentials. Returns the matched (row, col) costs.
std::vector<double> solve_assignment(const Eigen::MatrixXd& cost) {
  const int m = static_cast<int>(cost.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0), minv(m + 1, 0.0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1, 0);

  for (int i = 1; i <= m; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<double> matched;
  matched.reserve(m);
  for (int j = 1; j <= m; ++j) matched.push_back(cost(match[j] - 1, j - 1));
  return matched;
}

}  // namespace

double w1_empirical(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
  require(p.rows() == q.rows(), ErrorCode::shape_mismatch,
          "empirical measures must have equal cardinality");
  require(p.cols() == q.cols(), ErrorCode::shape_mismatch,
          "points must share the same dimension");
  require(p.rows() >= 1, ErrorCode::invalid_argument,
          "measures must contain at least one point");

  const Eigen::Index m = p.rows();
  Eigen::MatrixXd cost(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      cost(i, j) = (p.row(i) - q.row(j)).norm();

  std::vector<double> matched = solve_assignment(cost);
  // Summing in sorted order keeps the value exactly symmetric in (p, q).
  std::sort(matched.begin(), matched.end());
  double total = 0.0;
  for (double c : matched) total += c;
  return total / static_cast<double>(m);
}

double w2_gaussian(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& sigma1,
                   const Eigen::VectorXd& mu2, const Eigen::MatrixXd& sigma2) {
  const Eigen::Index d = mu1.size();
  require(mu2.size() == d && sigma1.rows() == d && sigma1.cols() == d &&
              sigma2.rows() == d && sigma2.cols() == d,
          ErrorCode::shape_mismatch,
          "means and covariances must share one dimension");

  const Eigen::MatrixXd root1 = psd_sqrt(sigma1);
  psd_sqrt(sigma2);  // validates PSD-ness of the second argument
  const Eigen::MatrixXd inner = root1 * sigma2 * root1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      0.5 * (inner + inner.transpose()));
  double cross = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    cross += std::sqrt(std::max(eig.eigenvalues()(i), 0.0));

  const double trace_term =
      std::max(sigma1.trace() + sigma2.trace() - 2.0 * cross, 0.0);
  return std::sqrt((mu1 - mu2).squaredNorm() + trace_term);
}

}  // namespace dprl
