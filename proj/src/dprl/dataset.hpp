#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "dprl/common.hpp"

namespace dprl {

enum class MechanismKind { laplace, gaussian };

// (epsilon, delta) pair governing noise calibration and ambiguity radii.
struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;  // 0 for pure DP
  void validate() const;
};

// Box bounds shared by all feature coordinates.
struct FeatureBounds {
  double lower = 0.0;
  double upper = 1.0;
  double width() const { return upper - lower; }
  void validate() const;
};

struct MechanismParams {
  MechanismKind kind = MechanismKind::laplace;
  double sensitivity = 0.0;  // Delta, in feature units
  double scale = 0.0;        // Laplace scale b or Gaussian sigma
};

enum class Provenance { clean, privatized };

// Feature matrix (n x p_x) plus output matrix (n x p_y) with bound metadata.
// Clean datasets keep every feature inside the bounds; privatized ones may
// leave them since the mechanism does not clamp.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd features, Eigen::MatrixXd outputs,
          FeatureBounds bounds);

  static Dataset privatized(Eigen::MatrixXd features, Eigen::MatrixXd outputs,
                            FeatureBounds bounds, MechanismParams params);

  Eigen::Index rows() const { return features_.rows(); }
  Eigen::Index feature_dim() const { return features_.cols(); }
  Eigen::Index output_dim() const { return outputs_.cols(); }

  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::MatrixXd& outputs() const { return outputs_; }
  const FeatureBounds& bounds() const { return bounds_; }
  Provenance provenance() const { return provenance_; }

  // Calibration of the noise applied to this dataset; nullptr when clean.
  const MechanismParams* mechanism() const {
    return provenance_ == Provenance::privatized ? &mechanism_.value()
                                                 : nullptr;
  }

 private:
  Dataset(Eigen::MatrixXd features, Eigen::MatrixXd outputs,
          FeatureBounds bounds, Provenance provenance,
          std::optional<MechanismParams> mechanism);

  Eigen::MatrixXd features_;
  Eigen::MatrixXd outputs_;
  FeatureBounds bounds_;
  Provenance provenance_;
  std::optional<MechanismParams> mechanism_;
};

}  // namespace dprl
