#include "rbv/reservoir.hpp"

#include <cmath>
#include <stdexcept>

namespace rbv {

void validate(const Topology& t) {
  if (t.s < 1 || t.p < 1 || t.m < 1 || t.n < 1)
    throw std::invalid_argument("topology: all dimensions must be >= 1");
}

std::vector<double> input_slots(const Topology& t, const std::vector<double>& features) {
  if (features.size() != static_cast<std::size_t>(t.s))
    throw std::invalid_argument("input arity " + std::to_string(features.size()) +
                                " does not match topology input size " + std::to_string(t.s));
  std::vector<double> y(static_cast<std::size_t>(t.s) + 1, 0.0);
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features[i]))
      throw std::invalid_argument("input value " + std::to_string(i) + " is not finite");
    y[i] = features[i];
  }
  return y;
}

std::vector<double> reservoir_raw_sums(const std::vector<double>& y, const ChaosParams& p,
                                       const Topology& t) {
  if (y.size() != static_cast<std::size_t>(t.s) + 1)
    throw std::invalid_argument("reservoir input must have S+1 slots");
  CongruentGenerator gen(p);
  std::vector<double> raw(static_cast<std::size_t>(t.p), 0.0);
  for (int j = 0; j < t.p; ++j) {
    double sum = 0.0;
    for (int i = 0; i <= t.s; ++i) sum += gen.next_weight() * y[static_cast<std::size_t>(i)];
    raw[static_cast<std::size_t>(j)] = sum;
  }
  return raw;
}

std::vector<double> reservoir_transform(const std::vector<double>& y, const ChaosParams& p,
                                        const ReservoirCoeffs& c, const Topology& t) {
  if (c.min_s.size() != static_cast<std::size_t>(t.p) ||
      c.max_s.size() != static_cast<std::size_t>(t.p) ||
      c.mean10.size() != static_cast<std::size_t>(t.p))
    throw std::invalid_argument("reservoir coefficients do not match topology width");
  const auto raw = reservoir_raw_sums(y, p, t);
  std::vector<double> sh(static_cast<std::size_t>(t.p) + 1);
  sh[0] = 1.0;
  for (int j = 0; j < t.p; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    const double range = c.max_s[idx] - c.min_s[idx];
    const double scaled = range > 0.0 ? (raw[idx] - c.min_s[idx]) / range : 0.0;
    sh[idx + 1] = scaled - 0.5 - c.mean10[idx];
  }
  return sh;
}

ReservoirCoeffs fit_reservoir_coeffs(const Dataset& d, const ChaosParams& p,
                                     const Topology& t) {
  validate(t);
  if (d.records.empty()) throw std::runtime_error("fit_reservoir_coeffs: empty dataset");
  const auto np = static_cast<std::size_t>(t.p);
  ReservoirCoeffs c;
  c.min_s.assign(np, 0.0);
  c.max_s.assign(np, 0.0);
  c.mean10.assign(np, 0.0);

  std::vector<std::vector<double>> raws;
  raws.reserve(d.records.size());
  for (const auto& r : d.records)
    raws.push_back(reservoir_raw_sums(input_slots(t, r.values), p, t));

  for (std::size_t j = 0; j < np; ++j) {
    double mn = raws[0][j], mx = raws[0][j];
    for (const auto& raw : raws) {
      mn = std::min(mn, raw[j]);
      mx = std::max(mx, raw[j]);
    }
    c.min_s[j] = mn;
    c.max_s[j] = mx;
    const double range = mx - mn;
    double acc = 0.0;
    for (const auto& raw : raws) {
      const double scaled = range > 0.0 ? (raw[j] - mn) / range : 0.0;
      acc += scaled - 0.5;
    }
    c.mean10[j] = acc / static_cast<double>(raws.size());
  }
  return c;
}

}  // namespace rbv
