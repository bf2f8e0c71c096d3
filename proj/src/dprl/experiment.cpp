#include "dprl/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "dprl/csv.hpp"
#include "dprl/gauss_dro.hpp"
#include "dprl/privacy.hpp"
#include "dprl/rng.hpp"

namespace dprl {

namespace {

constexpr std::uint64_t kSplitTag = 0x73706c6974ULL;
constexpr std::uint64_t kNoiseTag = 0x6e6f697365ULL;
constexpr std::uint64_t kSynthTag = 0x73796e7468ULL;

bool try_parse_double(const std::string& text, double* out) {
  const std::string token = trim(text);
  if (token.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || errno == ERANGE ||
      !std::isfinite(v))
    return false;
  *out = v;
  return true;
}

bool contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

void SchemaConfig::validate() const {
  require(!output_column.empty(), ErrorCode::schema_error,
          "schema needs an output_column");
  require(!contains(drop_columns, output_column), ErrorCode::schema_error,
          "output_column cannot be dropped");
}

SchemaConfig SchemaConfig::from_config(const KvConfig& config) {
  SchemaConfig schema;
  schema.output_column = config.get_string("output_column");
  if (config.has("drop_columns"))
    schema.drop_columns = config.get_string_list("drop_columns");
  if (config.has("categorical_columns"))
    schema.categorical_columns = config.get_string_list("categorical_columns");
  schema.scale_to_unit = config.get_bool("scale_to_unit", true);
  schema.validate();
  return schema;
}

SchemaConfig SchemaConfig::from_file(const std::string& path) {
  return from_config(KvConfig::from_file(path));
}

const char* method_name(Method method) {
  switch (method) {
    case Method::plain_erm:
      return "PlainERM";
    case Method::lipschitz_reg:
      return "LipschitzReg";
    case Method::gauss_dro:
      return "GaussDRO";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "PlainERM") return Method::plain_erm;
  if (name == "LipschitzReg") return Method::lipschitz_reg;
  if (name == "GaussDRO") return Method::gauss_dro;
  fail(ErrorCode::parse_error,
       "unknown method '" + name +
           "' (expected PlainERM, LipschitzReg or GaussDRO)");
}

void SweepConfig::validate() const {
  require(!epsilons.empty(), ErrorCode::invalid_argument,
          "sweep needs at least one epsilon");
  for (const double e : epsilons)
    require(std::isfinite(e) && e > 0.0, ErrorCode::invalid_argument,
            "epsilons must be positive reals");
  require(!seeds.empty(), ErrorCode::invalid_argument,
          "sweep needs at least one seed");
  require(!methods.empty(), ErrorCode::invalid_argument,
          "sweep needs at least one method");
  require(std::isfinite(delta) && delta >= 0.0 && delta < 1.0,
          ErrorCode::invalid_argument, "delta must lie in [0, 1)");
  require(n_train >= 1, ErrorCode::invalid_argument,
          "n_train must be positive");
  require(beta > 0.0 && beta < 1.0, ErrorCode::invalid_argument,
          "beta must lie in (0, 1)");
  if (rho_generic)
    require(std::isfinite(*rho_generic) && *rho_generic >= 0.0,
            ErrorCode::invalid_argument, "rho_generic must be nonnegative");
  concentration.validate();
}

SweepConfig SweepConfig::from_config(const KvConfig& config) {
  SweepConfig sweep;
  if (config.has("epsilons")) sweep.epsilons = config.get_double_list("epsilons");
  sweep.delta = config.get_double("delta", sweep.delta);
  sweep.n_train = config.get_int("n_train", sweep.n_train);
  if (config.has("seeds")) {
    for (const std::int64_t s : config.get_int_list("seeds")) {
      require(s >= 0, ErrorCode::invalid_argument, "seeds must be >= 0");
      sweep.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (config.has("rho_generic"))
    sweep.rho_generic = config.get_double("rho_generic");
  if (config.has("methods")) {
    sweep.methods.clear();
    for (const std::string& name : config.get_string_list("methods"))
      sweep.methods.push_back(method_from_name(name));
  }
  const std::string loss = config.get_string("loss", "quadratic");
  if (loss == "quadratic")
    sweep.loss_kind = LossKind::quadratic_linear;
  else if (loss == "absolute")
    sweep.loss_kind = LossKind::absolute_linear;
  else if (loss == "logistic")
    sweep.loss_kind = LossKind::logistic;
  else
    fail(ErrorCode::parse_error, "unknown loss '" + loss + "'");
  const std::string norm = config.get_string("norm", "l2");
  if (norm == "l2")
    sweep.norm = NormKind::l2;
  else if (norm == "l1")
    sweep.norm = NormKind::l1;
  else if (norm == "linf")
    sweep.norm = NormKind::linf;
  else
    fail(ErrorCode::parse_error, "unknown norm '" + norm + "'");
  if (config.has("x_bound")) sweep.x_bound = config.get_double("x_bound");
  if (config.has("y_bound")) sweep.y_bound = config.get_double("y_bound");
  sweep.beta = config.get_double("beta", sweep.beta);
  sweep.concentration.c1 = config.get_double("c1", sweep.concentration.c1);
  sweep.concentration.c2 = config.get_double("c2", sweep.concentration.c2);
  sweep.concentration.a = config.get_double("a", sweep.concentration.a);
  sweep.concentration.big_data =
      config.get_bool("big_data", sweep.concentration.big_data);
  sweep.solver.max_iters = config.get_int("max_iters", sweep.solver.max_iters);
  sweep.solver.step = config.get_double("step", sweep.solver.step);
  sweep.solver.tol = config.get_double("tol", sweep.solver.tol);
  const std::string rule = config.get_string("step_rule", "constant");
  if (rule == "constant")
    sweep.solver.step_rule = StepRule::constant;
  else if (rule == "diminishing")
    sweep.solver.step_rule = StepRule::diminishing;
  else
    fail(ErrorCode::parse_error, "unknown step_rule '" + rule + "'");
  return sweep;
}

SweepConfig SweepConfig::from_file(const std::string& path) {
  return from_config(KvConfig::from_file(path));
}

IngestResult ingest_csv(const std::string& path, const SchemaConfig& schema) {
  schema.validate();
  CsvTable table = read_csv_file(path);
  for (std::string& name : table.header) name = trim(name);

  std::map<std::string, int> index;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    require(index.emplace(table.header[i], static_cast<int>(i)).second,
            ErrorCode::schema_error,
            "duplicate column '" + table.header[i] + "'");
  }
  auto column = [&](const std::string& name) {
    const auto it = index.find(name);
    require(it != index.end(), ErrorCode::schema_error,
            "column '" + name + "' not in the CSV header");
    return it->second;
  };

  const int output_col = column(schema.output_column);
  for (const std::string& name : schema.drop_columns) column(name);
  for (const std::string& name : schema.categorical_columns) column(name);

  std::vector<int> feature_cols;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    const std::string& name = table.header[i];
    if (name == schema.output_column || contains(schema.drop_columns, name))
      continue;
    feature_cols.push_back(static_cast<int>(i));
  }
  require(!feature_cols.empty(), ErrorCode::schema_error,
          "schema leaves no feature columns");

  std::vector<int> used_cols = feature_cols;
  used_cols.push_back(output_col);
  std::map<int, std::map<std::string, double>> codes;  // first-appearance
  for (const std::string& name : schema.categorical_columns)
    codes[column(name)] = {};

  std::vector<std::vector<double>> kept;
  std::int64_t dropped = 0;
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      ++dropped;
      continue;
    }
    std::vector<double> values(used_cols.size());
    bool ok = true;
    // validate before interning so dropped rows never claim category codes
    for (std::size_t k = 0; k < used_cols.size() && ok; ++k) {
      const std::string cell = trim(row[used_cols[k]]);
      if (cell.empty()) {
        ok = false;
      } else if (codes.count(used_cols[k]) == 0) {
        ok = try_parse_double(cell, &values[k]);
      }
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    for (std::size_t k = 0; k < used_cols.size(); ++k) {
      const auto dict = codes.find(used_cols[k]);
      if (dict == codes.end()) continue;
      const std::string cell = trim(row[used_cols[k]]);
      const auto inserted =
          dict->second.emplace(cell, static_cast<double>(dict->second.size()));
      values[k] = inserted.first->second;
    }
    kept.push_back(std::move(values));
  }

  require(!kept.empty(), ErrorCode::insufficient_data,
          "no usable rows after ingest");

  const Eigen::Index n = static_cast<Eigen::Index>(kept.size());
  const Eigen::Index p_x = static_cast<Eigen::Index>(feature_cols.size());
  Eigen::MatrixXd features(n, p_x);
  Eigen::MatrixXd outputs(n, 1);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < p_x; ++c) features(r, c) = kept[r][c];
    outputs(r, 0) = kept[r][p_x];
  }

  FeatureBounds bounds{0.0, 1.0};
  if (schema.scale_to_unit) {
    auto rescale = [](Eigen::Ref<Eigen::MatrixXd> m) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double lo = m.col(c).minCoeff();
        const double hi = m.col(c).maxCoeff();
        if (hi > lo)
          m.col(c) = (m.col(c).array() - lo) / (hi - lo);
        else
          m.col(c).setZero();
      }
    };
    rescale(features);
    rescale(outputs);
  } else {
    double lo = features.minCoeff();
    double hi = features.maxCoeff();
    if (!(hi > lo)) hi = lo + 1.0;
    bounds = FeatureBounds{lo, hi};
  }

  return IngestResult{Dataset(std::move(features), std::move(outputs), bounds),
                      dropped};
}

std::pair<Dataset, Dataset> split(const Dataset& data, std::int64_t n_train,
                                  std::uint64_t seed) {
  require(n_train >= 1 && n_train < data.rows(), ErrorCode::invalid_argument,
          "n_train must satisfy 1 <= n_train < n");
  const Eigen::Index n = data.rows();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  NoiseSampler sampler(mix_seed(seed, kSplitTag));
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const Eigen::Index j =
        static_cast<Eigen::Index>(sampler.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }

  auto take = [&](Eigen::Index begin, Eigen::Index count) {
    Eigen::MatrixXd f(count, data.feature_dim());
    Eigen::MatrixXd y(count, data.output_dim());
    for (Eigen::Index r = 0; r < count; ++r) {
      f.row(r) = data.features().row(order[begin + r]);
      y.row(r) = data.outputs().row(order[begin + r]);
    }
    if (data.provenance() == Provenance::privatized)
      return Dataset::privatized(std::move(f), std::move(y), data.bounds(),
                                 *data.mechanism());
    return Dataset(std::move(f), std::move(y), data.bounds());
  };

  return {take(0, n_train), take(n_train, n - n_train)};
}

namespace {

struct RowKey {
  double epsilon;
  std::string method;
  std::uint64_t seed;
  bool operator<(const RowKey& other) const {
    if (epsilon != other.epsilon) return epsilon < other.epsilon;
    if (method != other.method) return method < other.method;
    return seed < other.seed;
  }
};

}  // namespace

ResultsTable run_sweep(const Dataset& data, const SchemaConfig& schema,
                       const SweepConfig& sweep_in) {
  // the schema has already shaped `data` during ingest; nothing to re-check
  (void)schema;
  require(data.provenance() == Provenance::clean, ErrorCode::provenance_error,
          "the sweep must start from clean data");

  SweepConfig sweep = sweep_in;
  const int p_x = static_cast<int>(data.feature_dim());
  const int p_y = static_cast<int>(data.output_dim());
  if (sweep.epsilons.empty()) {
    // default grid: [10^0, 10^2] / p_x, eight log-spaced points
    const double lo = 1.0 / p_x;
    const double hi = 100.0 / p_x;
    for (int i = 0; i < 8; ++i) {
      const double t = static_cast<double>(i) / 7.0;
      sweep.epsilons.push_back(
          std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
    }
  }
  if (sweep.seeds.empty())
    for (std::uint64_t s = 0; s < 20; ++s) sweep.seeds.push_back(s);
  sweep.validate();
  require(sweep.n_train < data.rows(), ErrorCode::insufficient_data,
          "n_train leaves no test split");

  LossSpec loss;
  loss.kind = sweep.loss_kind;
  loss.norm = sweep.norm;
  {
    const LossSpec from_box = LossSpec::for_box(
        sweep.loss_kind, data.bounds(), p_x, 1.0, sweep.norm);
    loss.x_bound = sweep.x_bound.value_or(from_box.x_bound);
    const double observed = data.outputs().cwiseAbs().maxCoeff();
    loss.y_bound = sweep.y_bound.value_or(observed > 0.0 ? observed : 1.0);
  }
  loss.validate();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  ResultsTable table;
  for (const double epsilon : sweep.epsilons) {
    for (const std::uint64_t seed : sweep.seeds) {
      auto parts = split(data, sweep.n_train, seed);
      const Dataset& test = parts.second;
      require(test.provenance() == Provenance::clean,
              ErrorCode::provenance_error, "test split must stay clean");

      const PrivacyBudget budget{epsilon, sweep.delta};
      const MechanismParams params =
          calibrate(MechanismKind::gaussian, data.bounds(), p_x, budget);
      // noise stream depends on the seed only, so the same draw is rescaled
      // across the epsilon grid (common random numbers)
      const Dataset train =
          privatize(parts.first, params, mix_seed(seed, kNoiseTag));
      const Radius bound =
          compute_radius(MechanismKind::gaussian, budget, p_x + p_y,
                         params.sensitivity, sweep.beta, sweep.n_train,
                         sweep.concentration);

      for (const Method method : sweep.methods) {
        ResultRow row;
        row.epsilon = epsilon;
        row.method = method;
        row.seed = seed;
        try {
          switch (method) {
            case Method::plain_erm: {
              row.rho_used = 0.0;
              const TrainResult fit =
                  train_regularized(train, loss, 0.0, sweep.solver);
              row.train_objective = fit.objective;
              row.test_loss = evaluate(test, loss, fit.model);
              break;
            }
            case Method::lipschitz_reg: {
              row.rho_used = sweep.rho_generic.value_or(bound.rho);
              const TrainResult fit =
                  train_regularized(train, loss, row.rho_used, sweep.solver);
              row.train_objective = fit.objective;
              row.test_loss = evaluate(test, loss, fit.model);
              break;
            }
            case Method::gauss_dro: {
              row.rho_used = bound.rho;
              const GaussDroResult fit =
                  train_gauss_dro(summarize(train), row.rho_used);
              row.train_objective = fit.objective;
              row.test_loss = evaluate(test, loss, to_theta(fit.model));
              break;
            }
          }
        } catch (const Error& e) {
          row.test_loss = nan;
          row.train_objective = nan;
          row.error = e.what();
        }
        table.rows.push_back(std::move(row));
      }
    }
  }

  std::sort(table.rows.begin(), table.rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              return RowKey{a.epsilon, method_name(a.method), a.seed} <
                     RowKey{b.epsilon, method_name(b.method), b.seed};
            });
  return table;
}

namespace {

struct Curve {
  std::string method;
  std::vector<double> epsilons;
  std::vector<double> means;
};

std::vector<Curve> mean_curves(const ResultsTable& table) {
  std::map<std::string, std::map<double, std::pair<double, int>>> acc;
  for (const ResultRow& row : table.rows) {
    if (!std::isfinite(row.test_loss)) continue;
    auto& cell = acc[method_name(row.method)][row.epsilon];
    cell.first += row.test_loss;
    cell.second += 1;
  }
  std::vector<Curve> curves;
  for (const auto& [method, by_eps] : acc) {
    Curve curve;
    curve.method = method;
    for (const auto& [eps, cell] : by_eps) {
      curve.epsilons.push_back(eps);
      curve.means.push_back(cell.first / cell.second);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::string join_sig17(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += format_sig17(values[i]);
  }
  return out;
}

const char* dash_for(const std::string& method) {
  if (method == "LipschitzReg") return "9 5";
  if (method == "GaussDRO") return "9 4 2 4";
  return "";  // PlainERM: solid
}

const char* color_for(const std::string& method) {
  if (method == "LipschitzReg") return "#1f77b4";
  if (method == "GaussDRO") return "#2ca02c";
  return "#d62728";
}

void write_plot_svg(const ResultsTable& table, const std::string& path) {
  const std::vector<Curve> curves = mean_curves(table);

  double eps_lo = std::numeric_limits<double>::infinity();
  double eps_hi = 0.0;
  double loss_hi = 0.0;
  for (const Curve& c : curves) {
    for (const double e : c.epsilons) {
      eps_lo = std::min(eps_lo, e);
      eps_hi = std::max(eps_hi, e);
    }
    for (const double m : c.means) loss_hi = std::max(loss_hi, m);
  }
  if (curves.empty()) {
    eps_lo = 1.0;
    eps_hi = 10.0;
  }
  if (eps_hi <= eps_lo) eps_hi = eps_lo * 10.0;
  if (loss_hi <= 0.0) loss_hi = 1.0;
  loss_hi *= 1.05;

  const double width = 720, height = 480;
  const double ml = 80, mr = 24, mt = 24, mb = 56;
  const double x0 = std::log10(eps_lo), x1 = std::log10(eps_hi);
  auto px = [&](double eps) {
    return ml + (std::log10(eps) - x0) / (x1 - x0) * (width - ml - mr);
  };
  auto py = [&](double loss) {
    return height - mb - loss / loss_hi * (height - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  // axes
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";

  // log-x decade ticks
  for (int k = static_cast<int>(std::ceil(x0 - 1e-9));
       k <= static_cast<int>(std::floor(x1 + 1e-9)); ++k) {
    const double x = px(std::pow(10.0, k));
    svg << "<line x1=\"" << x << "\" y1=\"" << height - mb << "\" x2=\"" << x
        << "\" y2=\"" << height - mb + 6 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << height - mb + 22
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << k
        << "</text>\n";
  }
  // y ticks
  for (int k = 0; k <= 5; ++k) {
    const double v = loss_hi * k / 5.0;
    const double y = py(v);
    svg << "<line x1=\"" << ml - 6 << "\" y1=\"" << y << "\" x2=\"" << ml
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%.3g", v);
    svg << "<text x=\"" << ml - 10 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << label
        << "</text>\n";
  }
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"14\" text-anchor=\"middle\">epsilon</text>\n";
  svg << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "18 "
      << (mt + height - mb) / 2 << ")\">mean test loss</text>\n";

  for (const Curve& curve : curves) {
    svg << "<polyline fill=\"none\" stroke=\"" << color_for(curve.method)
        << "\" stroke-width=\"2\"";
    if (*dash_for(curve.method))
      svg << " stroke-dasharray=\"" << dash_for(curve.method) << "\"";
    svg << " data-method=\"" << curve.method << "\" data-epsilons=\""
        << join_sig17(curve.epsilons) << "\" data-means=\""
        << join_sig17(curve.means) << "\" points=\"";
    for (std::size_t i = 0; i < curve.epsilons.size(); ++i) {
      if (i) svg << ' ';
      svg << px(curve.epsilons[i]) << ',' << py(curve.means[i]);
    }
    svg << "\"/>\n";
  }

  // legend
  double ly = mt + 10;
  for (const Curve& curve : curves) {
    svg << "<line x1=\"" << width - mr - 150 << "\" y1=\"" << ly
        << "\" x2=\"" << width - mr - 110 << "\" y2=\"" << ly
        << "\" stroke=\"" << color_for(curve.method) << "\" stroke-width=\"2\"";
    if (*dash_for(curve.method))
      svg << " stroke-dasharray=\"" << dash_for(curve.method) << "\"";
    svg << "/>\n";
    svg << "<text x=\"" << width - mr - 104 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\">" << curve.method << "</text>\n";
    ly += 18;
  }

  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::io_error, "cannot write " + path);
  out << svg.str();
  require(out.good(), ErrorCode::io_error, "failed writing " + path);
}

}  // namespace

void emit_report(const ResultsTable& table, const std::string& out_dir) {
  require(!table.rows.empty(), ErrorCode::invalid_argument,
          "refusing to report an empty table");
  std::error_code fs_error;
  std::filesystem::create_directories(out_dir, fs_error);
  require(!fs_error, ErrorCode::io_error,
          "cannot create output directory " + out_dir);

  const std::filesystem::path dir(out_dir);
  {
    std::ofstream out(dir / "results.csv", std::ios::binary);
    require(out.good(), ErrorCode::io_error, "cannot write results.csv");
    out << "epsilon,method,seed,test_loss,train_objective,rho_used\n";
    for (const ResultRow& row : table.rows) {
      out << csv_escape(format_sig17(row.epsilon)) << ','
          << csv_escape(method_name(row.method)) << ',' << row.seed << ','
          << csv_escape(format_sig17(row.test_loss)) << ','
          << csv_escape(format_sig17(row.train_objective)) << ','
          << csv_escape(format_sig17(row.rho_used)) << '\n';
    }
    require(out.good(), ErrorCode::io_error, "failed writing results.csv");
  }
  write_plot_svg(table, (dir / "plot.svg").string());
}

SweepFileReport run_sweep_file(const std::string& config_path,
                               const std::string& out_dir) {
  const KvConfig config = KvConfig::from_file(config_path);
  const SweepConfig sweep = SweepConfig::from_config(config);

  SweepFileReport report;
  SchemaConfig schema;
  std::optional<Dataset> data;
  if (config.has("csv")) {
    require(!config.get_bool("synthetic", false), ErrorCode::schema_error,
            "config gives both csv and synthetic data sources");
    schema = config.has("schema")
                 ? SchemaConfig::from_file(config.get_string("schema"))
                 : SchemaConfig::from_config(config);
    IngestResult ingested = ingest_csv(config.get_string("csv"), schema);
    report.dropped_rows = ingested.dropped_rows;
    data.emplace(std::move(ingested.data));
  } else {
    require(config.get_bool("synthetic", false), ErrorCode::schema_error,
            "config needs a data source: csv = PATH or synthetic = true");
    const std::int64_t n = config.get_int("synthetic_n", 2000);
    const int p = static_cast<int>(config.get_int("synthetic_p", 10));
    const std::uint64_t seed =
        static_cast<std::uint64_t>(config.get_int("synthetic_seed", 1));
    schema.output_column = "y";
    data.emplace(synthetic_gaussian_dataset(n, p, seed));
  }

  const ResultsTable table = run_sweep(*data, schema, sweep);
  emit_report(table, out_dir);
  report.result_rows = static_cast<std::int64_t>(table.rows.size());
  const std::filesystem::path dir(out_dir);
  report.results_csv = (dir / "results.csv").string();
  report.plot_svg = (dir / "plot.svg").string();
  return report;
}

Dataset synthetic_gaussian_dataset(std::int64_t n, int p_x,
                                   std::uint64_t seed) {
  require(n >= 2, ErrorCode::invalid_argument, "need at least two rows");
  require(p_x >= 1, ErrorCode::invalid_argument, "need at least one feature");
  NoiseSampler sampler(mix_seed(seed, kSynthTag));

  Eigen::VectorXd weights(p_x);
  for (int j = 0; j < p_x; ++j)
    weights(j) =
        (j % 2 == 0 ? 10.0 : -10.0) / std::sqrt(static_cast<double>(p_x));

  Eigen::MatrixXd features(n, p_x);
  for (Eigen::Index r = 0; r < n; ++r)
    for (int c = 0; c < p_x; ++c) features(r, c) = sampler.normal();
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    const double lo = features.col(c).minCoeff();
    const double hi = features.col(c).maxCoeff();
    if (hi > lo)
      features.col(c) = (features.col(c).array() - lo) / (hi - lo);
    else
      features.col(c).setZero();
  }

  // signal is linear in the scaled features and centred, so the zero model
  // degrades gracefully to the mean predictor
  Eigen::MatrixXd outputs =
      (features.rowwise() - Eigen::RowVectorXd::Constant(p_x, 0.5)) * weights;
  for (Eigen::Index r = 0; r < n; ++r)
    outputs(r, 0) += 0.5 * sampler.normal();
  return Dataset(std::move(features), std::move(outputs),
                 FeatureBounds{0.0, 1.0});
}

}  // namespace dprl
