#include "dprl/dataset.hpp"

#include <cmath>
#include <utility>

namespace dprl {

void PrivacyBudget::validate() const {
  require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::invalid_argument,
          "privacy budget requires epsilon > 0");
  require(std::isfinite(delta) && delta >= 0.0 && delta < 1.0,
          ErrorCode::invalid_argument,
          "privacy budget requires delta in [0, 1)");
}

void FeatureBounds::validate() const {
  require(std::isfinite(lower) && std::isfinite(upper) && lower < upper,
          ErrorCode::invalid_argument,
          "feature bounds require finite lower < upper");
}

Dataset::Dataset(Eigen::MatrixXd features, Eigen::MatrixXd outputs,
                 FeatureBounds bounds)
    : Dataset(std::move(features), std::move(outputs), bounds,
              Provenance::clean, std::nullopt) {}

Dataset Dataset::privatized(Eigen::MatrixXd features, Eigen::MatrixXd outputs,
                            FeatureBounds bounds, MechanismParams params) {
  return Dataset(std::move(features), std::move(outputs), bounds,
                 Provenance::privatized, params);
}

Dataset::Dataset(Eigen::MatrixXd features, Eigen::MatrixXd outputs,
                 FeatureBounds bounds, Provenance provenance,
                 std::optional<MechanismParams> mechanism)
    : features_(std::move(features)),
      outputs_(std::move(outputs)),
      bounds_(bounds),
      provenance_(provenance),
      mechanism_(mechanism) {
  bounds_.validate();
  require(features_.rows() >= 1, ErrorCode::invalid_argument,
          "dataset requires at least one record");
  require(features_.cols() >= 1, ErrorCode::invalid_argument,
          "dataset requires at least one feature");
  require(outputs_.cols() >= 1, ErrorCode::invalid_argument,
          "dataset requires at least one output");
  require(outputs_.rows() == features_.rows(), ErrorCode::shape_mismatch,
          "feature and output matrices must have the same number of rows");
  require(features_.allFinite() && outputs_.allFinite(),
          ErrorCode::invalid_argument, "dataset entries must be finite");
  if (provenance_ == Provenance::clean) {
    require((features_.array() >= bounds_.lower).all() &&
                (features_.array() <= bounds_.upper).all(),
            ErrorCode::invalid_argument,
            "clean dataset features must lie within the declared bounds");
  }
}

}  // namespace dprl
