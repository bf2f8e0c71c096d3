#pragma once

#include <cstdint>

#include "dprl/dataset.hpp"

namespace dprl {

// Sensitivity of the per-record identity query over the feature box:
// Delta = (upper - lower) * p_x.
double sensitivity(const FeatureBounds& bounds, int p_x);

// Noise calibration for the additive local-DP mechanisms. Laplace uses scale
// Delta / epsilon; Gaussian uses sigma = sqrt(2 ln(1.25/delta)) * Delta /
// epsilon and requires delta > 0.
MechanismParams calibrate(MechanismKind kind, const FeatureBounds& bounds,
                          int p_x, const PrivacyBudget& budget);

// Perturbs every feature entry with i.i.d. noise drawn from the calibrated
// distribution; outputs are copied bit-for-bit. Entries are sampled in
// row-major order so a seed pins the whole draw. Feature values may leave the
// bounds: the mechanism does not clamp.
Dataset privatize(const Dataset& data, const MechanismParams& params,
                  std::uint64_t seed);

}  // namespace dprl
