#include "rbv/scaler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbv {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

ScalerParams fit_scaler(const Dataset& d, ScalerKind kind) {
  if (d.records.empty()) throw std::runtime_error("fit_scaler: empty dataset");
  const std::size_t nf = d.feature_count();
  ScalerParams p;
  p.kind = kind;
  p.lo.resize(nf);
  p.hi.resize(nf);
  std::vector<double> col(d.records.size());
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t i = 0; i < d.records.size(); ++i) col[i] = d.records[i].values[f];
    if (kind == ScalerKind::MinMax) {
      const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
      p.lo[f] = *mn;
      p.hi[f] = *mx;
    } else {
      std::sort(col.begin(), col.end());
      const double median = quantile_sorted(col, 0.5);
      const double iqr = quantile_sorted(col, 0.75) - quantile_sorted(col, 0.25);
      p.lo[f] = median;
      p.hi[f] = iqr;
    }
  }
  return p;
}

RbvRecord apply_scaler(const ScalerParams& p, const RbvRecord& r) {
  if (r.values.size() != p.lo.size())
    throw std::invalid_argument("apply_scaler: record arity does not match fitted params");
  RbvRecord out;
  out.label = r.label;
  out.values.resize(r.values.size());
  for (std::size_t f = 0; f < r.values.size(); ++f) {
    const double x = r.values[f];
    if (p.kind == ScalerKind::MinMax) {
      const double range = p.hi[f] - p.lo[f];
      out.values[f] = range > 0.0 ? (x - p.lo[f]) / range : 0.0;
    } else {
      out.values[f] = p.hi[f] > 0.0 ? (x - p.lo[f]) / p.hi[f] : 0.0;
    }
  }
  return out;
}

Dataset apply_scaler(const ScalerParams& p, const Dataset& d) {
  Dataset out;
  out.feature_names = d.feature_names;
  out.schema_id = d.schema_id;
  out.records.reserve(d.records.size());
  for (const auto& r : d.records) out.records.push_back(apply_scaler(p, r));
  return out;
}

}  // namespace rbv
