#include "dprl/privacy.hpp"

#include <cmath>

#include "dprl/rng.hpp"

namespace dprl {

double sensitivity(const FeatureBounds& bounds, int p_x) {
  bounds.validate();
  require(p_x >= 1, ErrorCode::invalid_argument, "p_x must be at least 1");
  return bounds.width() * static_cast<double>(p_x);
}

MechanismParams calibrate(MechanismKind kind, const FeatureBounds& bounds,
                          int p_x, const PrivacyBudget& budget) {
  budget.validate();
  const double delta_sens = sensitivity(bounds, p_x);

  MechanismParams params;
  params.kind = kind;
  params.sensitivity = delta_sens;
  switch (kind) {
    case MechanismKind::laplace:
      params.scale = delta_sens / budget.epsilon;
      break;
    case MechanismKind::gaussian:
      require(budget.delta > 0.0, ErrorCode::invalid_argument,
              "the Gaussian mechanism requires delta > 0");
      // delta < 1 is already enforced, so log(1.25/delta) > 0 and the scale
      // is strictly positive.
      params.scale =
          std::sqrt(2.0 * std::log(1.25 / budget.delta)) * delta_sens /
          budget.epsilon;
      break;
  }
  return params;
}

Dataset privatize(const Dataset& data, const MechanismParams& params,
                  std::uint64_t seed) {
  require(data.provenance() == Provenance::clean, ErrorCode::provenance_error,
          "dataset is already privatized");
  require(params.scale > 0.0 && params.sensitivity > 0.0,
          ErrorCode::invalid_argument,
          "mechanism parameters must have positive scale and sensitivity");

  NoiseSampler sampler(seed);
  Eigen::MatrixXd noisy = data.features();
  for (Eigen::Index i = 0; i < noisy.rows(); ++i) {
    for (Eigen::Index j = 0; j < noisy.cols(); ++j) {
      const double w = params.kind == MechanismKind::laplace
                           ? sampler.laplace(params.scale)
                           : params.scale * sampler.normal();
      noisy(i, j) += w;
    }
  }
  return Dataset::privatized(std::move(noisy), data.outputs(), data.bounds(),
                             params);
}

}  // namespace dprl
