#include "dprl.h"

#include <cstring>
#include <string>
#include <utility>

#include "dprl/ambiguity.hpp"
#include "dprl/dataset.hpp"
#include "dprl/erm.hpp"
#include "dprl/experiment.hpp"
#include "dprl/gauss_dro.hpp"
#include "dprl/privacy.hpp"

struct dprl_dataset {
  dprl::Dataset impl;
};
struct dprl_theta_model {
  dprl::ThetaModel impl;
};
struct dprl_linear_model {
  dprl::LinearModel impl;
};

namespace {

thread_local std::string t_last_error;

dprl_status map_code(dprl::ErrorCode code) {
  using dprl::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument:
      return DPRL_ERR_INVALID_ARGUMENT;
    case ErrorCode::shape_mismatch:
      return DPRL_ERR_SHAPE_MISMATCH;
    case ErrorCode::domain_error:
      return DPRL_ERR_DOMAIN;
    case ErrorCode::provenance_error:
      return DPRL_ERR_PROVENANCE;
    case ErrorCode::schema_error:
      return DPRL_ERR_SCHEMA;
    case ErrorCode::parse_error:
      return DPRL_ERR_PARSE;
    case ErrorCode::io_error:
      return DPRL_ERR_IO;
    case ErrorCode::unsupported_dimension:
      return DPRL_ERR_UNSUPPORTED_DIMENSION;
    case ErrorCode::insufficient_data:
      return DPRL_ERR_INSUFFICIENT_DATA;
  }
  return DPRL_ERR_INTERNAL;
}

template <typename Fn>
dprl_status guarded(Fn&& fn) {
  try {
    fn();
    return DPRL_OK;
  } catch (const dprl::Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return DPRL_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return DPRL_ERR_INTERNAL;
  }
}

dprl_status invalid(const char* message) {
  t_last_error = message;
  return DPRL_ERR_INVALID_ARGUMENT;
}

dprl::MechanismKind to_mechanism(dprl_mechanism mechanism) {
  dprl::require(mechanism == DPRL_MECH_LAPLACE || mechanism == DPRL_MECH_GAUSSIAN,
                dprl::ErrorCode::invalid_argument, "unknown mechanism tag");
  return mechanism == DPRL_MECH_LAPLACE ? dprl::MechanismKind::laplace
                                        : dprl::MechanismKind::gaussian;
}

dprl::LossSpec to_loss_spec(const dprl::Dataset& data, dprl_loss loss,
                            dprl_norm norm) {
  dprl::LossKind kind;
  switch (loss) {
    case DPRL_LOSS_QUADRATIC:
      kind = dprl::LossKind::quadratic_linear;
      break;
    case DPRL_LOSS_ABSOLUTE:
      kind = dprl::LossKind::absolute_linear;
      break;
    case DPRL_LOSS_LOGISTIC:
      kind = dprl::LossKind::logistic;
      break;
    default:
      dprl::fail(dprl::ErrorCode::invalid_argument, "unknown loss tag");
  }
  dprl::NormKind norm_kind;
  switch (norm) {
    case DPRL_NORM_L2:
      norm_kind = dprl::NormKind::l2;
      break;
    case DPRL_NORM_L1:
      norm_kind = dprl::NormKind::l1;
      break;
    case DPRL_NORM_LINF:
      norm_kind = dprl::NormKind::linf;
      break;
    default:
      dprl::fail(dprl::ErrorCode::invalid_argument, "unknown norm tag");
  }
  dprl::LossSpec spec = dprl::LossSpec::for_box(
      kind, data.bounds(), static_cast<int>(data.feature_dim()), 1.0,
      norm_kind);
  const double observed = data.outputs().cwiseAbs().maxCoeff();
  if (observed > 1.0) spec.y_bound = observed;
  return spec;
}

}  // namespace

extern "C" {

const char* dprl_last_error(void) { return t_last_error.c_str(); }

dprl_status dprl_dataset_create(const double* features, const double* outputs,
                                int64_t rows, int32_t p_x, int32_t p_y,
                                double lower, double upper,
                                dprl_dataset** out) {
  if (!features || !outputs || !out) return invalid("null pointer argument");
  return guarded([&] {
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    dprl::require(rows >= 1 && p_x >= 1 && p_y >= 1,
                  dprl::ErrorCode::invalid_argument,
                  "rows, p_x and p_y must be positive");
    Eigen::MatrixXd f =
        Eigen::Map<const RowMajor>(features, rows, p_x);
    Eigen::MatrixXd y = Eigen::Map<const RowMajor>(outputs, rows, p_y);
    *out = new dprl_dataset{dprl::Dataset(std::move(f), std::move(y),
                                          dprl::FeatureBounds{lower, upper})};
  });
}

dprl_status dprl_dataset_ingest_csv(const char* csv_path,
                                    const char* schema_path, int64_t* dropped,
                                    dprl_dataset** out) {
  if (!csv_path || !schema_path || !out) return invalid("null pointer argument");
  return guarded([&] {
    dprl::IngestResult result = dprl::ingest_csv(
        csv_path, dprl::SchemaConfig::from_file(schema_path));
    if (dropped) *dropped = result.dropped_rows;
    *out = new dprl_dataset{std::move(result.data)};
  });
}

int64_t dprl_dataset_rows(const dprl_dataset* data) {
  return data ? static_cast<int64_t>(data->impl.rows()) : 0;
}

int32_t dprl_dataset_feature_dim(const dprl_dataset* data) {
  return data ? static_cast<int32_t>(data->impl.feature_dim()) : 0;
}

int32_t dprl_dataset_output_dim(const dprl_dataset* data) {
  return data ? static_cast<int32_t>(data->impl.output_dim()) : 0;
}

int dprl_dataset_is_privatized(const dprl_dataset* data) {
  return data && data->impl.provenance() == dprl::Provenance::privatized ? 1
                                                                         : 0;
}

dprl_status dprl_dataset_copy_features(const dprl_dataset* data,
                                       double* buffer) {
  if (!data || !buffer) return invalid("null pointer argument");
  return guarded([&] {
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<RowMajor>(buffer, data->impl.rows(), data->impl.feature_dim()) =
        data->impl.features();
  });
}

dprl_status dprl_dataset_copy_outputs(const dprl_dataset* data,
                                      double* buffer) {
  if (!data || !buffer) return invalid("null pointer argument");
  return guarded([&] {
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<RowMajor>(buffer, data->impl.rows(), data->impl.output_dim()) =
        data->impl.outputs();
  });
}

void dprl_dataset_free(dprl_dataset* data) { delete data; }

dprl_status dprl_sensitivity(double lower, double upper, int32_t p_x,
                             double* out) {
  if (!out) return invalid("null pointer argument");
  return guarded([&] {
    *out = dprl::sensitivity(dprl::FeatureBounds{lower, upper}, p_x);
  });
}

dprl_status dprl_privatize(const dprl_dataset* data, dprl_mechanism mechanism,
                           double epsilon, double delta, uint64_t seed,
                           dprl_dataset** out) {
  if (!data || !out) return invalid("null pointer argument");
  return guarded([&] {
    const dprl::MechanismParams params = dprl::calibrate(
        to_mechanism(mechanism), data->impl.bounds(),
        static_cast<int>(data->impl.feature_dim()),
        dprl::PrivacyBudget{epsilon, delta});
    *out = new dprl_dataset{dprl::privatize(data->impl, params, seed)};
  });
}

dprl_status dprl_radius(dprl_mechanism mechanism, double epsilon, double delta,
                        int32_t p, double sensitivity, double beta, int64_t n,
                        double c1, double c2, double a, int use_big_data,
                        double* rho) {
  if (!rho) return invalid("null pointer argument");
  return guarded([&] {
    dprl::ConcentrationConfig config;
    config.c1 = c1;
    config.c2 = c2;
    config.a = a;
    config.big_data = use_big_data != 0;
    const dprl::Radius radius = dprl::compute_radius(
        to_mechanism(mechanism), dprl::PrivacyBudget{epsilon, delta}, p,
        sensitivity, beta, n, config);
    *rho = radius.rho;
  });
}

dprl_status dprl_train_regularized(const dprl_dataset* data, dprl_loss loss,
                                   dprl_norm norm, double rho,
                                   int64_t max_iters, double* objective,
                                   dprl_theta_model** out) {
  if (!data || !out) return invalid("null pointer argument");
  return guarded([&] {
    dprl::SolverConfig config;
    if (max_iters > 0) config.max_iters = max_iters;
    const dprl::TrainResult result = dprl::train_regularized(
        data->impl, to_loss_spec(data->impl, loss, norm), rho, config);
    if (objective) *objective = result.objective;
    *out = new dprl_theta_model{result.model};
  });
}

int32_t dprl_theta_rows(const dprl_theta_model* model) {
  return model ? static_cast<int32_t>(model->impl.theta.rows()) : 0;
}

int32_t dprl_theta_cols(const dprl_theta_model* model) {
  return model ? static_cast<int32_t>(model->impl.theta.cols()) : 0;
}

dprl_status dprl_theta_copy(const dprl_theta_model* model, double* buffer) {
  if (!model || !buffer) return invalid("null pointer argument");
  return guarded([&] {
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<RowMajor>(buffer, model->impl.theta.rows(),
                         model->impl.theta.cols()) = model->impl.theta;
  });
}

void dprl_theta_free(dprl_theta_model* model) { delete model; }

dprl_status dprl_evaluate_theta(const dprl_dataset* data, dprl_loss loss,
                                dprl_norm norm, const dprl_theta_model* model,
                                double* out) {
  if (!data || !model || !out) return invalid("null pointer argument");
  return guarded([&] {
    *out = dprl::evaluate(data->impl, to_loss_spec(data->impl, loss, norm),
                          model->impl);
  });
}

dprl_status dprl_train_gauss_dro(const dprl_dataset* data, double rho,
                                 double* objective, dprl_linear_model** out) {
  if (!data || !out) return invalid("null pointer argument");
  return guarded([&] {
    const dprl::GaussDroResult result = dprl::train_gauss_dro(data->impl, rho);
    if (objective) *objective = result.objective;
    *out = new dprl_linear_model{result.model};
  });
}

int32_t dprl_linear_output_dim(const dprl_linear_model* model) {
  return model ? static_cast<int32_t>(model->impl.weights.rows()) : 0;
}

int32_t dprl_linear_feature_dim(const dprl_linear_model* model) {
  return model ? static_cast<int32_t>(model->impl.weights.cols()) : 0;
}

dprl_status dprl_linear_copy(const dprl_linear_model* model, double* weights,
                             double* bias) {
  if (!model) return invalid("null pointer argument");
  return guarded([&] {
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    if (weights)
      Eigen::Map<RowMajor>(weights, model->impl.weights.rows(),
                           model->impl.weights.cols()) = model->impl.weights;
    if (bias)
      Eigen::Map<Eigen::VectorXd>(bias, model->impl.bias.size()) =
          model->impl.bias;
  });
}

void dprl_linear_free(dprl_linear_model* model) { delete model; }

dprl_status dprl_evaluate_linear(const dprl_dataset* data, dprl_loss loss,
                                 dprl_norm norm,
                                 const dprl_linear_model* model, double* out) {
  if (!data || !model || !out) return invalid("null pointer argument");
  return guarded([&] {
    *out = dprl::evaluate(data->impl, to_loss_spec(data->impl, loss, norm),
                          dprl::to_theta(model->impl));
  });
}

dprl_status dprl_sweep_run(const char* config_path, const char* out_dir,
                           int64_t* result_rows, int64_t* dropped_rows) {
  if (!config_path || !out_dir) return invalid("null pointer argument");
  return guarded([&] {
    const dprl::SweepFileReport report =
        dprl::run_sweep_file(config_path, out_dir);
    if (result_rows) *result_rows = report.result_rows;
    if (dropped_rows) *dropped_rows = report.dropped_rows;
  });
}

}  // extern "C"
