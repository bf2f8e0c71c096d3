// Acceptance gate: nine end-to-end checks with hard tolerances and runtime
// caps, one verdict line each. argv[1] must point at the CLI binary.
#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dprl/ambiguity.hpp"
#include "dprl/dataset.hpp"
#include "dprl/erm.hpp"
#include "dprl/experiment.hpp"
#include "dprl/gauss_dro.hpp"
#include "dprl/privacy.hpp"
#include "test_util.hpp"

using namespace dprl;
using testutil::central_diff;
using testutil::random_clean_dataset;
using testutil::random_matrix;
using testutil::random_psd;
using testutil::uniform;

namespace {

int failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void verdict(int number, const char* title, bool pass, double elapsed,
             double cap, const std::string& detail) {
  if (elapsed > cap) pass = false;
  if (!pass) ++failures;
  std::printf("criterion %d: %-34s %s  (%s; %.2f s, cap %.0f s)\n", number,
              title, pass ? "PASS" : "FAIL", detail.c_str(), elapsed, cap);
  std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
  char buffer[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

GaussianSummary make_summary(const Eigen::VectorXd& mean,
                             const Eigen::MatrixXd& covariance, int p_x,
                             int p_y) {
  GaussianSummary summary;
  summary.mean = mean;
  summary.covariance = covariance;
  summary.count = 2;
  summary.p_x = p_x;
  summary.p_y = p_y;
  return summary;
}

// --- 1: radius hand value through the CLI -------------------------------

void criterion_radius_cli(const std::string& cli) {
  Timer timer;
  if (cli.empty()) {
    verdict(1, "radius formula via CLI", false, timer.seconds(), 1.0,
            "no CLI path given (argv[1])");
    return;
  }
  const std::string command =
      "\"" + cli +
      "\" radius --mechanism gaussian --epsilon 10 --delta 1e-2 --px 2 --py 1";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) {
    verdict(1, "radius formula via CLI", false, timer.seconds(), 1.0,
            "popen failed");
    return;
  }
  double rho = std::numeric_limits<double>::quiet_NaN();
  char line[256];
  while (std::fgets(line, sizeof line, pipe))
    std::sscanf(line, " rho = %lf", &rho);
  const int status = pclose(pipe);
  const bool pass =
      status == 0 && std::isfinite(rho) && std::abs(rho - 1.07647) <= 1e-4;
  verdict(1, "radius formula via CLI", pass, timer.seconds(), 1.0,
          fmt("rho=%.15g, want 1.07647 +/- 1e-4", rho));
}

// --- 2: inner dual against the 1-D calculus value -----------------------

void criterion_inner_dual_hand_value() {
  Timer timer;
  const InnerSolution inner = inner_dual(
      Eigen::MatrixXd::Zero(1, 1), Eigen::Matrix2d::Identity(), 1.0);
  const bool pass =
      std::abs(inner.value - 4.0) <= 1e-6 && std::abs(inner.xi - 2.0) <= 1e-4;
  verdict(2, "inner dual hand value", pass, timer.seconds(), 1.0,
          fmt("f=%.8f (want 4), xi=%.6f (want 2)", inner.value, inner.xi));
}

// --- 3: nested solver vs two-level grid search --------------------------

// f(xi) for the 2x2 joint case in closed form; M = [a  -1]
double scalar_inner_integrand(double a, const Eigen::Matrix2d& sigma,
                              double rho, double xi) {
  Eigen::Matrix2d k;
  k << a * a, -a, -a, 1.0;
  const Eigen::Matrix2d shifted = xi * Eigen::Matrix2d::Identity() - k;
  const double det = shifted.determinant();
  const double tr_inv_sigma =
      (shifted(1, 1) * sigma(0, 0) - shifted(0, 1) * sigma(1, 0) -
       shifted(1, 0) * sigma(0, 1) + shifted(0, 0) * sigma(1, 1)) /
      det;
  return xi * (rho * rho - sigma.trace()) + xi * xi * tr_inv_sigma;
}

double scalar_inner_grid(double a, const Eigen::Matrix2d& sigma, double rho) {
  const double floor = a * a + 1.0;
  double lo = floor * (1.0 + 1e-9);
  double hi = floor + 40.0 + 40.0 / std::max(rho, 1e-2);
  double best = std::numeric_limits<double>::infinity();
  double best_xi = lo;
  for (int stage = 0; stage < 3; ++stage) {
    const double h = (hi - lo) / 4000;
    for (int i = 0; i <= 4000; ++i) {
      const double xi = lo + i * h;
      if (xi <= floor) continue;
      const double value = scalar_inner_integrand(a, sigma, rho, xi);
      if (value < best) {
        best = value;
        best_xi = xi;
      }
    }
    lo = std::max(floor * (1.0 + 1e-12), best_xi - h);
    hi = best_xi + h;
  }
  return best;
}

void criterion_nested_vs_grid() {
  Timer timer;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Matrix2d sigma = random_psd(2, 1.5);
    const double rho = uniform(0.3, 1.0);
    const GaussDroResult result =
        train_gauss_dro(make_summary(Eigen::Vector2d::Zero(), sigma, 1, 1), rho);

    // coarse pass over the weight, then a fine pass around the minimizer
    double best = std::numeric_limits<double>::infinity();
    double best_a = 0.0;
    for (int i = -300; i <= 300; ++i) {
      const double value = scalar_inner_grid(i * 1e-2, sigma, rho);
      if (value < best) {
        best = value;
        best_a = i * 1e-2;
      }
    }
    for (int i = -200; i <= 200; ++i) {
      const double value = scalar_inner_grid(best_a + i * 1e-4, sigma, rho);
      best = std::min(best, value);
    }
    worst = std::max(worst, std::abs(result.objective - best));
  }
  verdict(3, "nested solver vs grid search", worst <= 1e-3, timer.seconds(),
          60.0, fmt("worst |solver - grid| = %.3e (tol 1e-3)", worst));
}

// --- 4: certificate feasibility and objective agreement -----------------

void criterion_certificates() {
  Timer timer;
  double worst_eig = 0.0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int p_x = 1 + trial % 4;
    const int p_y = 1 + (trial / 4) % std::min(2, 5 - p_x);
    const int joint = p_x + p_y;
    const GaussianSummary summary =
        make_summary(random_matrix(joint, 1, 0.5).col(0),
                     random_psd(joint, 1.0), p_x, p_y);
    const double rho = uniform(0.1, 1.0);
    const GaussDroResult result = train_gauss_dro(summary, rho);
    const SdpCertificate certificate = make_certificate(
        result.model.weights, result.model.bias, summary, rho);
    const CertificateCheck check =
        check_sdp_certificate(certificate, summary, rho);
    if (!check.feasible) worst_eig = std::min(worst_eig, -1.0);
    worst_eig = std::min(worst_eig, check.min_eigenvalue);
    worst_gap =
        std::max(worst_gap, std::abs(check.objective - result.objective));
  }
  const bool pass = worst_eig >= -1e-8 && worst_gap <= 1e-6;
  verdict(4, "certificate consistency", pass, timer.seconds(), 60.0,
          fmt("min eig %.2e (floor -1e-8), objective gap %.2e (tol 1e-6)",
              worst_eig, worst_gap));
}

// --- 5: rho = 0 degeneracy to least squares -----------------------------

void criterion_rho_zero_least_squares() {
  Timer timer;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int p_x = 1 + trial % 4;
    const Dataset data = random_clean_dataset(40, p_x, 1);
    Eigen::MatrixXd design(40, p_x + 1);
    design.leftCols(p_x) = data.features();
    design.col(p_x).setOnes();
    const Eigen::VectorXd ls =
        (design.transpose() * design)
            .ldlt()
            .solve(design.transpose() * data.outputs().col(0));

    const LossSpec spec = LossSpec::for_box(
        LossKind::quadratic_linear, data.bounds(), p_x,
        data.outputs().cwiseAbs().maxCoeff(), NormKind::l2);
    SolverConfig config;
    config.tol = 1e-15;
    const TrainResult erm = train_regularized(data, spec, 0.0, config);
    worst = std::max(worst, (erm.model.theta.col(0) - ls).norm());

    const GaussDroResult dro = train_gauss_dro(data, 0.0);
    worst = std::max(worst, (to_theta(dro.model).theta.col(0) - ls).norm());
  }
  verdict(5, "rho = 0 matches least squares", worst <= 1e-5, timer.seconds(),
          60.0, fmt("worst parameter distance %.2e (tol 1e-5)", worst));
}

// --- 6: mechanism noise statistics --------------------------------------

void criterion_mechanism_statistics() {
  Timer timer;
  const Eigen::Index n = 100000;
  const Dataset zeros(Eigen::MatrixXd::Zero(n, 1), Eigen::MatrixXd::Zero(n, 1),
                      FeatureBounds{0.0, 1.0});
  std::string detail;
  bool pass = true;
  const struct {
    MechanismKind kind;
    PrivacyBudget budget;
    const char* name;
  } cases[] = {
      {MechanismKind::laplace, {0.5, 0.0}, "laplace"},
      {MechanismKind::gaussian, {1.0, 1e-2}, "gaussian"},
  };
  for (const auto& c : cases) {
    const MechanismParams params = calibrate(c.kind, zeros.bounds(), 1, c.budget);
    const Eigen::VectorXd noise =
        privatize(zeros, params, 20250817).features().col(0);
    const double mean = noise.mean();
    const double var = (noise.array() - mean).square().sum() / double(n - 1);
    const double want = c.kind == MechanismKind::laplace
                            ? 2.0 * params.scale * params.scale
                            : params.scale * params.scale;
    const bool mean_ok = std::abs(mean) <= 0.05 * params.scale;
    const bool var_ok = std::abs(var - want) <= 0.05 * want;
    pass = pass && mean_ok && var_ok;
    detail += fmt("%s mean %+.3f var %.3f/%.3f  ", c.name, mean, var, want);
  }
  verdict(6, "mechanism noise statistics", pass, timer.seconds(), 10.0, detail);
}

// --- 7: transport metric oracles ----------------------------------------

double w1_by_permutations(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
  const int m = static_cast<int>(p.rows());
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < m; ++i)
      total += (p.row(i) - q.row(perm[i])).norm();
    best = std::min(best, total / m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void criterion_metric_oracles() {
  Timer timer;
  double worst_w1 = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + trial % 5;
    const int d = 1 + trial % 3;
    const Eigen::MatrixXd p = random_matrix(m, d, 2.0);
    const Eigen::MatrixXd q = random_matrix(m, d, 2.0);
    worst_w1 =
        std::max(worst_w1, std::abs(w1_empirical(p, q) - w1_by_permutations(p, q)));
  }
  double worst_w2 = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 4;
    Eigen::VectorXd a(d), b(d);
    for (int i = 0; i < d; ++i) {
      a(i) = uniform(0.05, 3.0);
      b(i) = uniform(0.05, 3.0);
    }
    const double w2 = w2_gaussian(Eigen::VectorXd::Zero(d), a.asDiagonal(),
                                  Eigen::VectorXd::Zero(d), b.asDiagonal());
    const double closed =
        (a.array().sqrt() - b.array().sqrt()).square().sum();
    worst_w2 = std::max(worst_w2, std::abs(w2 * w2 - closed));
  }
  const bool pass = worst_w1 <= 1e-12 && worst_w2 <= 1e-9;
  verdict(7, "transport metric oracles", pass, timer.seconds(), 30.0,
          fmt("w1 gap %.2e (tol 1e-12), w2 diag gap %.2e (tol 1e-9)", worst_w1,
              worst_w2));
}

// --- 8: figure-shape sweep ----------------------------------------------

void criterion_figure_shape() {
  Timer timer;
  std::string source = "synthetic surrogate";
  std::optional<Dataset> data;
  if (std::filesystem::exists("data/adult.csv")) {
    try {
      SchemaConfig schema;
      schema.output_column = "income";
      schema.categorical_columns = {"workclass", "education",
                                    "marital-status", "occupation",
                                    "relationship", "race", "sex",
                                    "native-country", "income"};
      data.emplace(ingest_csv("data/adult.csv", schema).data);
      source = "data/adult.csv";
    } catch (const Error&) {
      data.reset();
    }
  }
  if (!data) data.emplace(synthetic_gaussian_dataset(2000, 10, 1));

  SweepConfig sweep;  // empty epsilons/seeds pick the documented defaults
  sweep.n_train = 50;
  sweep.delta = 1e-2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) sweep.seeds.push_back(seed);
  sweep.solver.max_iters = 4000000;  // the eps_min cells are badly conditioned
  sweep.solver.tol = 1e-16;
  const ResultsTable table = run_sweep(*data, SchemaConfig{}, sweep);

  std::map<Method, std::map<double, std::pair<double, int>>> cells;
  int errors = 0;
  for (const ResultRow& row : table.rows) {
    if (!row.error.empty()) {
      ++errors;
      continue;
    }
    auto& cell = cells[row.method][row.epsilon];
    cell.first += row.test_loss;
    cell.second += 1;
  }
  std::map<Method, std::vector<double>> means;
  for (const auto& [method, curve] : cells)
    for (const auto& [epsilon, cell] : curve)
      means[method].push_back(cell.first / cell.second);

  double worst_rise = -std::numeric_limits<double>::infinity();
  for (const auto& [method, curve] : means)
    for (std::size_t i = 1; i < curve.size(); ++i)
      worst_rise = std::max(worst_rise, (curve[i] - curve[i - 1]) / curve[i - 1]);

  const double plain_lo = means[Method::plain_erm].front();
  const double gauss_lo = means[Method::gauss_dro].front();
  const double lip_lo = means[Method::lipschitz_reg].front();
  const double plain_hi = means[Method::plain_erm].back();
  const double gauss_hi = means[Method::gauss_dro].back();
  const double lip_hi = means[Method::lipschitz_reg].back();
  const double hi_lo = std::min({plain_hi, gauss_hi, lip_hi});
  const double hi_hi = std::max({plain_hi, gauss_hi, lip_hi});

  const bool shape_ok = worst_rise <= 0.02;
  const bool ordering_ok = gauss_lo <= plain_lo && lip_lo <= plain_lo;
  const bool agree_ok = (hi_hi - hi_lo) / hi_lo <= 0.05;
  const bool pass = errors == 0 && shape_ok && ordering_ok && agree_ok &&
                    means[Method::plain_erm].size() == 8;
  verdict(8, "figure-shape sweep", pass, timer.seconds(), 600.0,
          fmt("%s; rise %.2e<=2e-2 %c; order P-G %+.2e P-L %+.2e %c; "
              "spread %.3f%%<=5%% %c",
              source.c_str(), worst_rise, shape_ok ? 'y' : 'n',
              plain_lo - gauss_lo, plain_lo - lip_lo, ordering_ok ? 'y' : 'n',
              100.0 * (hi_hi - hi_lo) / hi_lo, agree_ok ? 'y' : 'n'));
}

// --- 9: gradients vs central finite differences -------------------------

void criterion_gradient_checks() {
  Timer timer;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int p_x = 1 + trial % 4;
    const int p_y = 1 + trial % 2;
    const int joint = p_x + p_y;
    const Eigen::MatrixXd a = random_matrix(p_y, p_x, 1.5);
    const Eigen::MatrixXd sigma = random_psd(joint, 1.0);
    const double rho = uniform(0.2, 1.0);
    Eigen::MatrixXd direction = random_matrix(p_y, p_x, 1.0);
    direction /= direction.norm();
    const double analytic =
        (inner_dual_gradient(a, sigma, rho).array() * direction.array()).sum();
    const double numeric = central_diff(
        [&](double t) {
          return inner_dual(a + t * direction, sigma, rho).value;
        },
        0.0, 1e-5);
    worst = std::max(worst, std::abs(analytic - numeric) /
                                std::max(1.0, std::abs(numeric)));
  }

  for (int trial = 0; trial < 20; ++trial) {
    const int p_x = 1 + trial % 4;
    const bool logistic = trial % 2 == 1;
    Dataset data = random_clean_dataset(30, p_x, 1);
    if (logistic) {
      Eigen::MatrixXd labels = data.outputs();
      const double cut = labels.col(0).mean();
      for (Eigen::Index i = 0; i < labels.rows(); ++i)
        labels(i, 0) = labels(i, 0) > cut ? 1.0 : 0.0;
      data = Dataset(data.features(), labels, data.bounds());
    }
    const LossSpec spec = LossSpec::for_box(
        logistic ? LossKind::logistic : LossKind::quadratic_linear,
        data.bounds(), p_x, logistic ? 1.0 : data.outputs().cwiseAbs().maxCoeff(),
        NormKind::l2);
    const double rho = uniform(0.0, 0.3);
    Eigen::MatrixXd design(30, p_x + 1);
    design.leftCols(p_x) = data.features();
    design.col(p_x).setOnes();
    // offset away from zero keeps the l2 regularizer smooth
    Eigen::VectorXd theta = random_matrix(p_x + 1, 1, 0.5).col(0);
    theta.array() += 1.5;
    Eigen::VectorXd direction = random_matrix(p_x + 1, 1, 1.0).col(0);
    direction /= direction.norm();
    const double analytic =
        objective_subgradient(design, data.outputs().col(0), spec, rho, theta)
            .dot(direction);
    const double numeric = central_diff(
        [&](double t) {
          ThetaModel model;
          model.theta = theta + t * direction;
          return regularized_objective(data, spec, rho, model);
        },
        0.0, 1e-5);
    worst = std::max(worst, std::abs(analytic - numeric) /
                                std::max(1.0, std::abs(numeric)));
  }
  verdict(9, "gradients vs finite differences", worst <= 1e-4, timer.seconds(),
          60.0, fmt("worst relative error %.2e (tol 1e-4)", worst));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  criterion_radius_cli(cli);
  criterion_inner_dual_hand_value();
  criterion_nested_vs_grid();
  criterion_certificates();
  criterion_rho_zero_least_squares();
  criterion_mechanism_statistics();
  criterion_metric_oracles();
  criterion_figure_shape();
  criterion_gradient_checks();
  if (failures == 0) {
    std::printf("all 9 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", failures);
  return 1;
}
