/* C interface of the dprl library: training on locally privatized tabular
 * data with distributionally robust estimators. All objects are opaque
 * handles; every fallible call returns a status and leaves a thread-local
 * message readable through dprl_last_error(). Matrix buffers are row-major.
 */
#ifndef DPRL_H
#define DPRL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dprl_status {
  DPRL_OK = 0,
  DPRL_ERR_INVALID_ARGUMENT = 1,
  DPRL_ERR_SHAPE_MISMATCH = 2,
  DPRL_ERR_DOMAIN = 3,
  DPRL_ERR_PROVENANCE = 4,
  DPRL_ERR_SCHEMA = 5,
  DPRL_ERR_PARSE = 6,
  DPRL_ERR_IO = 7,
  DPRL_ERR_UNSUPPORTED_DIMENSION = 8,
  DPRL_ERR_INSUFFICIENT_DATA = 9,
  DPRL_ERR_INTERNAL = 10
} dprl_status;

/* Message describing the most recent failure on this thread ("" if none).
 * The pointer stays valid until the next failing dprl call on the thread. */
const char* dprl_last_error(void);

typedef enum dprl_mechanism {
  DPRL_MECH_LAPLACE = 0,
  DPRL_MECH_GAUSSIAN = 1
} dprl_mechanism;

typedef enum dprl_loss {
  DPRL_LOSS_QUADRATIC = 0,
  DPRL_LOSS_ABSOLUTE = 1,
  DPRL_LOSS_LOGISTIC = 2
} dprl_loss;

typedef enum dprl_norm {
  DPRL_NORM_L2 = 0,
  DPRL_NORM_L1 = 1,
  DPRL_NORM_LINF = 2
} dprl_norm;

/* ---- datasets ---------------------------------------------------------- */

typedef struct dprl_dataset dprl_dataset;

/* Clean dataset from buffers: features is rows*p_x, outputs rows*p_y, all
 * features inside [lower, upper]. */
dprl_status dprl_dataset_create(const double* features, const double* outputs,
                                int64_t rows, int32_t p_x, int32_t p_y,
                                double lower, double upper,
                                dprl_dataset** out);

/* CSV + schema file ingestion; *dropped (optional) receives the number of
 * rows discarded for missing or unparseable values. */
dprl_status dprl_dataset_ingest_csv(const char* csv_path,
                                    const char* schema_path, int64_t* dropped,
                                    dprl_dataset** out);

int64_t dprl_dataset_rows(const dprl_dataset* data);
int32_t dprl_dataset_feature_dim(const dprl_dataset* data);
int32_t dprl_dataset_output_dim(const dprl_dataset* data);
int dprl_dataset_is_privatized(const dprl_dataset* data);
dprl_status dprl_dataset_copy_features(const dprl_dataset* data,
                                       double* buffer);
dprl_status dprl_dataset_copy_outputs(const dprl_dataset* data,
                                      double* buffer);
void dprl_dataset_free(dprl_dataset* data);

/* ---- local privacy ----------------------------------------------------- */

/* Identity-query sensitivity over the feature box: (upper - lower) * p_x. */
dprl_status dprl_sensitivity(double lower, double upper, int32_t p_x,
                             double* out);

/* Per-entry additive noise on every feature; outputs are copied untouched.
 * Laplace uses scale sensitivity/epsilon, Gaussian needs delta > 0. */
dprl_status dprl_privatize(const dprl_dataset* data, dprl_mechanism mechanism,
                           double epsilon, double delta, uint64_t seed,
                           dprl_dataset** out);

/* Ambiguity radius covering the privatization noise (plus the finite-sample
 * concentration term unless use_big_data). p is the joint dimension
 * p_x + p_y; pass n <= 0 with use_big_data = 1 when n is irrelevant. */
dprl_status dprl_radius(dprl_mechanism mechanism, double epsilon, double delta,
                        int32_t p, double sensitivity, double beta, int64_t n,
                        double c1, double c2, double a, int use_big_data,
                        double* rho);

/* ---- regularized ERM --------------------------------------------------- */

typedef struct dprl_theta_model dprl_theta_model;

/* Subgradient fit of the Lipschitz-regularized empirical objective with
 * strength rho; pass max_iters <= 0 for the default budget. The model stacks
 * feature weights and a trailing bias row, (p_x + 1) x p_y. */
dprl_status dprl_train_regularized(const dprl_dataset* data, dprl_loss loss,
                                   dprl_norm norm, double rho,
                                   int64_t max_iters, double* objective,
                                   dprl_theta_model** out);

int32_t dprl_theta_rows(const dprl_theta_model* model);
int32_t dprl_theta_cols(const dprl_theta_model* model);
dprl_status dprl_theta_copy(const dprl_theta_model* model, double* buffer);
void dprl_theta_free(dprl_theta_model* model);

dprl_status dprl_evaluate_theta(const dprl_dataset* data, dprl_loss loss,
                                dprl_norm norm, const dprl_theta_model* model,
                                double* out);

/* ---- Gaussian DRO ------------------------------------------------------ */

typedef struct dprl_linear_model dprl_linear_model;

/* Worst-case quadratic fit over the radius-rho Gaussian ambiguity ball. */
dprl_status dprl_train_gauss_dro(const dprl_dataset* data, double rho,
                                 double* objective, dprl_linear_model** out);

int32_t dprl_linear_output_dim(const dprl_linear_model* model);
int32_t dprl_linear_feature_dim(const dprl_linear_model* model);
/* weights is p_y*p_x row-major, bias p_y; either may be NULL to skip. */
dprl_status dprl_linear_copy(const dprl_linear_model* model, double* weights,
                             double* bias);
void dprl_linear_free(dprl_linear_model* model);

dprl_status dprl_evaluate_linear(const dprl_dataset* data, dprl_loss loss,
                                 dprl_norm norm,
                                 const dprl_linear_model* model, double* out);

/* ---- experiment sweeps -------------------------------------------------- */

/* Runs the full epsilon sweep described by a flat key-value config file and
 * writes results.csv and plot.svg under out_dir. result_rows / dropped_rows
 * are optional. */
dprl_status dprl_sweep_run(const char* config_path, const char* out_dir,
                           int64_t* result_rows, int64_t* dropped_rows);

#ifdef __cplusplus
}
#endif

#endif /* DPRL_H */
