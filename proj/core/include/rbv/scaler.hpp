#ifndef RBV_SCALER_HPP
#define RBV_SCALER_HPP

#include <vector>

#include "rbv/dataset.hpp"

namespace rbv {

enum class ScalerKind { MinMax, Robust };

struct ScalerParams {
  ScalerKind kind = ScalerKind::MinMax;
  // MinMax: lo = min, hi = max. Robust: lo = median, hi = IQR.
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Quartiles use linear interpolation between closest ranks.
ScalerParams fit_scaler(const Dataset& d, ScalerKind kind);

RbvRecord apply_scaler(const ScalerParams& p, const RbvRecord& r);
Dataset apply_scaler(const ScalerParams& p, const Dataset& d);

// Linear-interpolation quantile of a sorted sample, q in [0,1].
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace rbv

#endif
