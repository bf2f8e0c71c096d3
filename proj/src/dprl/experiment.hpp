#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dprl/ambiguity.hpp"
#include "dprl/dataset.hpp"
#include "dprl/erm.hpp"
#include "dprl/kvconfig.hpp"

namespace dprl {

struct SchemaConfig {
  std::string output_column;
  std::vector<std::string> drop_columns;
  std::vector<std::string> categorical_columns;
  bool scale_to_unit = true;

  void validate() const;
  static SchemaConfig from_config(const KvConfig& config);
  static SchemaConfig from_file(const std::string& path);
};

enum class Method { plain_erm, lipschitz_reg, gauss_dro };

const char* method_name(Method method);
Method method_from_name(const std::string& name);

struct SweepConfig {
  std::vector<double> epsilons;
  double delta = 1e-2;
  std::int64_t n_train = 50;
  std::vector<std::uint64_t> seeds;
  std::optional<double> rho_generic;  // unset: fall back to the radius bound
  std::vector<Method> methods = {Method::plain_erm, Method::lipschitz_reg,
                                 Method::gauss_dro};
  LossKind loss_kind = LossKind::quadratic_linear;
  NormKind norm = NormKind::l2;
  std::optional<double> x_bound;  // default: from the data bounds
  std::optional<double> y_bound;  // default: max |y| over the clean data
  double beta = 0.05;
  ConcentrationConfig concentration;
  SolverConfig solver;

  void validate() const;
  static SweepConfig from_config(const KvConfig& config);
  static SweepConfig from_file(const std::string& path);
};

struct ResultRow {
  double epsilon = 0.0;
  Method method = Method::plain_erm;
  std::uint64_t seed = 0;
  double test_loss = 0.0;
  double train_objective = 0.0;
  double rho_used = 0.0;
  std::string error;  // empty on success; failed cells carry NaN losses
};

struct ResultsTable {
  std::vector<ResultRow> rows;
};

struct IngestResult {
  Dataset data;
  std::int64_t dropped_rows = 0;
};

// Loads a CSV with a header row, applies the schema (drops, first-appearance
// integer coding of categoricals, optional min-max scaling of every kept
// column to [0,1]) and returns the clean dataset plus the number of rows
// dropped for missing or unparseable values.
IngestResult ingest_csv(const std::string& path, const SchemaConfig& schema);

// Seeded uniform shuffle, then prefix/suffix split into n_train / rest.
std::pair<Dataset, Dataset> split(const Dataset& data, std::int64_t n_train,
                                  std::uint64_t seed);

// Full protocol: per (epsilon, seed) privatize the train split with the
// Gaussian mechanism and fit each enabled method, then score on the clean
// test split. Rows come back sorted by (epsilon, method name, seed).
ResultsTable run_sweep(const Dataset& data, const SchemaConfig& schema,
                       const SweepConfig& sweep);

// Writes results.csv and plot.svg under out_dir.
void emit_report(const ResultsTable& table, const std::string& out_dir);

struct SweepFileReport {
  std::int64_t result_rows = 0;
  std::int64_t dropped_rows = 0;
  std::string results_csv;
  std::string plot_svg;
};

// Self-contained sweep driver: the config carries the sweep keys plus a data
// source, either csv = PATH (with schema = PATH or inline schema keys) or
// synthetic = true (optional synthetic_n / synthetic_p / synthetic_seed).
SweepFileReport run_sweep_file(const std::string& config_path,
                               const std::string& out_dir);

// Surrogate regression sample: standard-normal features, a fixed linear
// signal with mild observation noise, then min-max scaled to the unit box.
Dataset synthetic_gaussian_dataset(std::int64_t n, int p_x,
                                   std::uint64_t seed);

}  // namespace dprl
