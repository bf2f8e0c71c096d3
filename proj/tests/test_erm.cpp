#include "dprl/erm.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>

#include "dprl/ambiguity.hpp"
#include "dprl/privacy.hpp"
#include "test_util.hpp"

using namespace dprl;

namespace {

Dataset one_record(double x, double y) {
  Eigen::MatrixXd xs(1, 1), ys(1, 1);
  xs << x;
  ys << y;
  return Dataset(xs, ys, FeatureBounds{-1.0, 1.0});
}

LossSpec spec_of(LossKind kind, NormKind norm, double x_bound,
                 double y_bound) {
  LossSpec spec;
  spec.kind = kind;
  spec.norm = norm;
  spec.x_bound = x_bound;
  spec.y_bound = y_bound;
  return spec;
}

}  // namespace

TEST(DualNorm, TableAndCauchySchwarz) {
  Eigen::VectorXd v(2);
  v << 3.0, -4.0;
  EXPECT_DOUBLE_EQ(dual_norm(v, NormKind::l2), 5.0);
  EXPECT_DOUBLE_EQ(dual_norm(v, NormKind::l1), 4.0);   // dual is linf
  EXPECT_DOUBLE_EQ(dual_norm(v, NormKind::linf), 7.0); // dual is l1

  // generalized Cauchy-Schwarz |t^T v| <= |t|_* |v| on random pairs
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd t = testutil::random_matrix(4, 1, 2.0);
    const Eigen::VectorXd w = testutil::random_matrix(4, 1, 2.0);
    EXPECT_LE(std::abs(t.dot(w)),
              dual_norm(t, NormKind::l2) * w.norm() + 1e-12);
    EXPECT_LE(std::abs(t.dot(w)),
              dual_norm(t, NormKind::l1) * w.cwiseAbs().sum() + 1e-12);
    EXPECT_LE(std::abs(t.dot(w)),
              dual_norm(t, NormKind::linf) * w.cwiseAbs().maxCoeff() + 1e-12);
  }
}

TEST(DualNorm, SubgradientSupportsItsNorm) {
  // g in the subdifferential satisfies g . v = dual_norm(v)
  for (const NormKind norm : {NormKind::l2, NormKind::l1, NormKind::linf}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd v = testutil::random_matrix(5, 1, 3.0);
      const Eigen::VectorXd g = dual_norm_subgradient(v, norm);
      EXPECT_NEAR(g.dot(v), dual_norm(v, norm), 1e-12);
    }
    EXPECT_DOUBLE_EQ(
        dual_norm_subgradient(Eigen::VectorXd::Zero(3), norm).norm(), 0.0);
  }
}

TEST(DualNorm, LinfTieBreaksAtLowestIndex) {
  Eigen::VectorXd v(3);
  v << -2.0, 2.0, 1.0;  // |v0| = |v1|: index 0 wins
  const Eigen::VectorXd g = dual_norm_subgradient(v, NormKind::l1);
  EXPECT_DOUBLE_EQ(g(0), -1.0);
  EXPECT_DOUBLE_EQ(g(1), 0.0);
  EXPECT_DOUBLE_EQ(g(2), 0.0);
}

TEST(Lipschitz, RemarkFormulas) {
  Eigen::VectorXd theta(2);
  theta << 3.0, 4.0;
  EXPECT_DOUBLE_EQ(
      lipschitz_constant(spec_of(LossKind::quadratic_linear, NormKind::l2,
                                 1.0, 1.0),
                         theta),
      75.0);  // (X+1+Y) |theta|^2 = 3 * 25

  Eigen::VectorXd theta2(2);
  theta2 << 3.0, -4.0;
  EXPECT_DOUBLE_EQ(
      lipschitz_constant(spec_of(LossKind::absolute_linear, NormKind::l1,
                                 7.0, 2.0),
                         theta2),
      4.0);  // |theta|_inf, bounds irrelevant

  EXPECT_DOUBLE_EQ(
      lipschitz_constant(spec_of(LossKind::logistic, NormKind::l2, 2.0, 1.0),
                         Eigen::VectorXd::Zero(4)),
      0.0);

  Eigen::VectorXd theta3(1);
  theta3 << 2.0;
  EXPECT_DOUBLE_EQ(
      lipschitz_constant(spec_of(LossKind::logistic, NormKind::l2, 3.0, 1.0),
                         theta3),
      12.0);  // (Y+X+2) |theta| = 6 * 2
}

TEST(Loss, HandValues) {
  const LossSpec quad = spec_of(LossKind::quadratic_linear, NormKind::l2,
                                1.0, 1.0);
  ThetaModel zero;
  zero.theta = Eigen::MatrixXd::Zero(2, 1);
  EXPECT_DOUBLE_EQ(empirical_loss(one_record(0.0, 1.0), quad, zero), 0.5);

  const LossSpec logi = spec_of(LossKind::logistic, NormKind::l2, 1.0, 1.0);
  EXPECT_NEAR(empirical_loss(one_record(0.0, 1.0), logi, zero),
              std::log(2.0), 1e-15);

  // perfect interpolation scores zero
  Eigen::MatrixXd xs(3, 1), ys(3, 1);
  xs << 0.0, 0.5, 1.0;
  ys << 1.0, 2.0, 3.0;  // y = 2x + 1
  const Dataset data(xs, ys, FeatureBounds{0.0, 1.0});
  ThetaModel fit;
  fit.theta = Eigen::MatrixXd(2, 1);
  fit.theta << 2.0, 1.0;
  EXPECT_NEAR(empirical_loss(data, quad, fit), 0.0, 1e-30);
  EXPECT_DOUBLE_EQ(evaluate(data, quad, fit),
                   empirical_loss(data, quad, fit));
}

TEST(Loss, LogisticRejectsNonBinaryOutputs) {
  const LossSpec logi = spec_of(LossKind::logistic, NormKind::l2, 1.0, 1.0);
  ThetaModel zero;
  zero.theta = Eigen::MatrixXd::Zero(2, 1);
  EXPECT_DPRL_ERROR(empirical_loss(one_record(0.0, 0.5), logi, zero),
                    ErrorCode::invalid_argument);
}

TEST(Subgradient, MatchesCentralDifferencesAtSmoothPoints) {
  const Dataset data = testutil::random_clean_dataset(30, 3, 1);
  Eigen::MatrixXd design(30, 4);
  design.leftCols(3) = data.features();
  design.col(3).setOnes();
  const Eigen::VectorXd y = data.outputs().col(0);

  struct Case {
    LossKind kind;
    NormKind norm;
  };
  const Case cases[] = {{LossKind::quadratic_linear, NormKind::l2},
                        {LossKind::logistic, NormKind::l2},
                        {LossKind::quadratic_linear, NormKind::linf},
                        {LossKind::absolute_linear, NormKind::l1}};
  for (const Case& c : cases) {
    LossSpec spec = spec_of(c.kind, c.norm, std::sqrt(3.0), 1.0);
    Dataset eval_data = c.kind == LossKind::logistic
                            ? Dataset(data.features(),
                                      (data.outputs().array() > 0.5)
                                          .cast<double>()
                                          .matrix(),
                                      data.bounds())
                            : data;
    const Eigen::VectorXd y_eval = eval_data.outputs().col(0);
    const double rho = 0.05;
    for (int trial = 0; trial < 5; ++trial) {
      // offset away from zero keeps every nonsmooth seam at a distance
      Eigen::VectorXd theta = testutil::random_matrix(4, 1, 1.0);
      theta.array() += 1.5;
      const Eigen::VectorXd grad =
          objective_subgradient(design, y_eval, spec, rho, theta);
      for (int k = 0; k < 4; ++k) {
        const double h = 1e-6;
        auto value_at = [&](double t) {
          Eigen::VectorXd shifted = theta;
          shifted(k) = t;
          ThetaModel model;
          model.theta = shifted;
          return regularized_objective(eval_data, spec, rho, model);
        };
        const double fd = testutil::central_diff(value_at, theta(k), h);
        const double scale = std::max({1.0, std::abs(fd), std::abs(grad(k))});
        EXPECT_NEAR(grad(k), fd, 1e-4 * scale)
            << "kind=" << int(c.kind) << " norm=" << int(c.norm) << " k=" << k;
      }
    }
  }
}

TEST(Train, RhoZeroQuadraticMatchesLeastSquares) {
  const Dataset data = testutil::random_clean_dataset(40, 2, 1);
  Eigen::MatrixXd design(40, 3);
  design.leftCols(2) = data.features();
  design.col(2).setOnes();
  const Eigen::VectorXd y = data.outputs().col(0);
  const Eigen::VectorXd theta_ls =
      (design.transpose() * design).ldlt().solve(design.transpose() * y);
  const double obj_ls =
      (design * theta_ls - y).squaredNorm() / (2.0 * 40.0);

  const LossSpec spec = LossSpec::for_unit_box(LossKind::quadratic_linear, 2,
                                               NormKind::l2);
  SolverConfig config;
  config.tol = 1e-15;
  const TrainResult result = train_regularized(data, spec, 0.0, config);
  EXPECT_TRUE(result.converged);
  EXPECT_NEAR(result.objective, obj_ls, 1e-6 * std::max(1.0, obj_ls));
  EXPECT_LT((result.model.theta.col(0) - theta_ls).norm(), 1e-5);
}

TEST(Train, HugeRhoDrivesAbsoluteLossModelToZero) {
  const Dataset data = testutil::random_clean_dataset(25, 2, 1);
  const LossSpec spec = LossSpec::for_unit_box(LossKind::absolute_linear, 2,
                                               NormKind::l2);
  SolverConfig config;
  config.step_rule = StepRule::diminishing;
  config.max_iters = 20000;
  const TrainResult result = train_regularized(data, spec, 1e6, config);
  EXPECT_LE(result.model.theta.norm(), 1e-3);
  // optimality of zero: any theta with |theta| > 1e-3 pays more regularizer
  // than the whole loss range can refund (loss slope is bounded by ~2 here
  // while the regularizer slope is 1e6)
  ThetaModel zero;
  zero.theta = Eigen::MatrixXd::Zero(3, 1);
  EXPECT_NEAR(result.objective, regularized_objective(data, spec, 1e6, zero),
              1e-9);
}

TEST(Train, SmallInstanceMatchesDenseGridOracle) {
  Eigen::MatrixXd xs(5, 1), ys(5, 1);
  xs << 0.0, 0.25, 0.5, 0.75, 1.0;
  ys << 0.1, 0.4, 0.4, 0.8, 0.9;
  const Dataset data(xs, ys, FeatureBounds{0.0, 1.0});
  const LossSpec spec = LossSpec::for_unit_box(LossKind::quadratic_linear, 1,
                                               NormKind::l2);
  const double rho = 0.1;
  const double c = spec.x_bound + 1.0 + spec.y_bound;

  // sufficient statistics make the 6001^2 grid cheap
  const double sxx = xs.array().square().sum(), sx = xs.sum();
  const double sxy = (xs.array() * ys.array()).sum(), sy = ys.sum();
  const double syy = ys.array().square().sum();
  const double n = 5.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = -3000; i <= 3000; ++i) {
    const double w = i * 1e-3;
    for (int j = -3000; j <= 3000; ++j) {
      const double b = j * 1e-3;
      const double sq = w * w * sxx + n * b * b + syy + 2.0 * w * b * sx -
                        2.0 * w * sxy - 2.0 * b * sy;
      const double obj = sq / (2.0 * n) + rho * c * (w * w + b * b);
      if (obj < best) best = obj;
    }
  }

  const TrainResult result = train_regularized(data, spec, rho, {});
  EXPECT_NEAR(result.objective, best, 1e-3);
  EXPECT_LE(result.objective, best + 1e-9);  // solver must not be worse
}

TEST(Train, BestObjectiveTraceIsNonincreasing) {
  const Dataset data = testutil::random_clean_dataset(20, 2, 1);
  const LossSpec spec = LossSpec::for_unit_box(LossKind::quadratic_linear, 2,
                                               NormKind::l2);
  SolverConfig config;
  config.record_trace = true;
  const TrainResult result = train_regularized(data, spec, 0.05, config);
  ASSERT_GT(result.objective_trace.size(), 1u);
  for (std::size_t i = 1; i < result.objective_trace.size(); ++i)
    EXPECT_LE(result.objective_trace[i], result.objective_trace[i - 1] + 1e-15);
}

TEST(Train, RegularizationPathShrinksTheDualNorm) {
  const Dataset data = testutil::random_clean_dataset(30, 2, 1);
  const LossSpec spec = LossSpec::for_unit_box(LossKind::quadratic_linear, 2,
                                               NormKind::l2);
  double previous = std::numeric_limits<double>::infinity();
  for (const double rho : {0.0, 0.01, 0.05, 0.2, 1.0, 5.0}) {
    const TrainResult result = train_regularized(data, spec, rho, {});
    const double norm = dual_norm(result.model.theta.col(0), spec.norm);
    EXPECT_LE(norm, previous + 1e-6);
    previous = norm;
  }
}

TEST(Train, NonConvergenceWithinBudgetIsFlagged) {
  const Dataset data = testutil::random_clean_dataset(20, 2, 1);
  const LossSpec spec = LossSpec::for_unit_box(LossKind::quadratic_linear, 2,
                                               NormKind::l2);
  SolverConfig config;
  config.max_iters = 3;
  const TrainResult result = train_regularized(data, spec, 0.0, config);
  EXPECT_FALSE(result.converged);
  EXPECT_EQ(result.iterations, 3);
}

TEST(Train, DeterministicAndPerOutputIndependent) {
  const Dataset data = testutil::random_clean_dataset(25, 3, 2);
  const LossSpec spec = LossSpec::for_unit_box(LossKind::quadratic_linear, 3,
                                               NormKind::l2);
  const TrainResult a = train_regularized(data, spec, 0.02, {});
  const TrainResult b = train_regularized(data, spec, 0.02, {});
  EXPECT_TRUE((a.model.theta.array() == b.model.theta.array()).all());

  // training output columns separately gives the same parameters
  for (int j = 0; j < 2; ++j) {
    const Dataset single(data.features(), data.outputs().col(j),
                         data.bounds());
    const TrainResult solo = train_regularized(single, spec, 0.02, {});
    EXPECT_LT((solo.model.theta.col(0) - a.model.theta.col(j)).norm(), 1e-12);
  }
}

TEST(Train, CertificateCoversCleanLossAtDeskScale) {
  // J = objective on privatized data with the mechanism-matched radius
  // should dominate the clean-population loss in >= 95% of noise draws.
  const Eigen::Index n_train = 40;
  const Dataset population = testutil::random_clean_dataset(4000, 1, 1);
  Eigen::MatrixXd xs = population.features().topRows(n_train);
  Eigen::MatrixXd ys = population.outputs().topRows(n_train);
  const Dataset train_clean(xs, ys, population.bounds());

  const PrivacyBudget budget{20.0, 1e-2};
  const MechanismParams params =
      calibrate(MechanismKind::gaussian, train_clean.bounds(), 1, budget);
  const Radius radius =
      compute_radius(MechanismKind::gaussian, budget, 2, params.sensitivity,
                     0.05, n_train, ConcentrationConfig{});

  const double y_max = population.outputs().cwiseAbs().maxCoeff();
  LossSpec spec = LossSpec::for_unit_box(LossKind::quadratic_linear, 1,
                                         NormKind::l2);
  spec.y_bound = std::max(1.0, y_max);

  int covered = 0;
  const int trials = 150;
  for (int t = 0; t < trials; ++t) {
    const Dataset noisy = privatize(train_clean, params, 1000 + t);
    const TrainResult fit = train_regularized(noisy, spec, radius.rho, {});
    const double clean_loss = evaluate(population, spec, fit.model);
    if (clean_loss <= fit.objective + 1e-12) ++covered;
  }
  EXPECT_GE(covered, static_cast<int>(0.95 * trials));
}
