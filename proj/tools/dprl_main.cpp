// dprl command line: ingest / sweep / radius. Talks to the library strictly
// through the C interface.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "dprl.h"

namespace {

int report_failure(const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, dprl_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributionally robust learning on locally privatized data"};
  app.require_subcommand(1);

  // ingest: parse a CSV through a schema and describe the result
  std::string csv_path, schema_path;
  CLI::App* ingest = app.add_subcommand("ingest", "check a CSV/schema pair");
  ingest->add_option("--csv", csv_path, "input CSV with a header row")
      ->required();
  ingest->add_option("--schema", schema_path, "schema file (key = value)")
      ->required();

  // sweep: run the privacy/epsilon experiment described by a config file
  std::string config_path, out_dir;
  CLI::App* sweep = app.add_subcommand("sweep", "run an epsilon sweep");
  sweep->add_option("--config", config_path, "sweep config (key = value)")
      ->required();
  sweep->add_option("--out", out_dir, "output directory")->required();

  // radius: ambiguity radius for a privacy budget
  std::string mechanism = "gaussian";
  double epsilon = 0.0, delta = 0.0, beta = 0.05;
  double lower = 0.0, upper = 1.0, c1 = 1.0, c2 = 1.0, a = 2.0;
  std::int64_t px = 0, py = 1, n = 0;
  CLI::App* radius = app.add_subcommand("radius", "ambiguity radius");
  radius->add_option("--mechanism", mechanism, "laplace or gaussian")
      ->check(CLI::IsMember({"laplace", "gaussian"}));
  radius->add_option("--epsilon", epsilon, "privacy budget")->required();
  radius->add_option("--delta", delta, "failure budget (gaussian)");
  radius->add_option("--px", px, "feature dimension")->required();
  radius->add_option("--py", py, "output dimension (default 1)");
  radius->add_option("--lower", lower, "feature lower bound (default 0)");
  radius->add_option("--upper", upper, "feature upper bound (default 1)");
  radius->add_option("--n", n,
                     "training sample size; enables the concentration term");
  radius->add_option("--beta", beta, "confidence split (default 0.05)");
  radius->add_option("--c1", c1, "concentration constant c1");
  radius->add_option("--c2", c2, "concentration constant c2");
  radius->add_option("--a", a, "light-tail exponent");

  CLI11_PARSE(app, argc, argv);

  if (*ingest) {
    int64_t dropped = 0;
    dprl_dataset* data = nullptr;
    if (dprl_dataset_ingest_csv(csv_path.c_str(), schema_path.c_str(),
                                &dropped, &data) != DPRL_OK)
      return report_failure("ingest");
    std::printf("rows = %" PRId64 "\n", dprl_dataset_rows(data));
    std::printf("features = %d\n", dprl_dataset_feature_dim(data));
    std::printf("outputs = %d\n", dprl_dataset_output_dim(data));
    std::printf("dropped = %" PRId64 "\n", dropped);
    dprl_dataset_free(data);
    return 0;
  }

  if (*sweep) {
    int64_t rows = 0, dropped = 0;
    if (dprl_sweep_run(config_path.c_str(), out_dir.c_str(), &rows,
                       &dropped) != DPRL_OK)
      return report_failure("sweep");
    if (dropped > 0)
      std::printf("dropped = %" PRId64 "\n", dropped);
    std::printf("wrote %s/results.csv (%" PRId64 " rows)\n", out_dir.c_str(),
                rows);
    std::printf("wrote %s/plot.svg\n", out_dir.c_str());
    return 0;
  }

  // radius
  const dprl_mechanism mech =
      mechanism == "laplace" ? DPRL_MECH_LAPLACE : DPRL_MECH_GAUSSIAN;
  double sensitivity = 0.0;
  if (dprl_sensitivity(lower, upper, static_cast<int32_t>(px), &sensitivity) !=
      DPRL_OK)
    return report_failure("radius");
  const int use_big_data = n <= 0;
  double rho = 0.0;
  if (dprl_radius(mech, epsilon, delta, static_cast<int32_t>(px + py),
                  sensitivity, beta, n, c1, c2, a, use_big_data,
                  &rho) != DPRL_OK)
    return report_failure("radius");
  std::printf("sensitivity = %.17g\n", sensitivity);
  std::printf("rho = %.17g\n", rho);
  return 0;
}
