#ifndef RBV_RESERVOIR_HPP
#define RBV_RESERVOIR_HPP

#include <vector>

#include "rbv/chaos.hpp"
#include "rbv/dataset.hpp"

namespace rbv {

/// Network sizes. S is the last input index (S+1 slots, feature values in
/// 0..S-1 and slot S fixed at 0), P the reservoir width, M the hidden width,
/// N the last output index (N+1 output neurons). The 51:50:20:2 network is
/// S=51, P=50, M=20, N=1.
struct Topology {
  int s = 51;
  int p = 50;
  int m = 20;
  int n = 1;
};

void validate(const Topology& t);

struct ReservoirCoeffs {
  std::vector<double> min_s;   // length P, per-neuron raw-sum minimum
  std::vector<double> max_s;   // length P
  std::vector<double> mean10;  // length P, mean of the scaled-and-centered sums
};

/// Pads a feature vector (length S) to the S+1 input slots, slot S = 0.
std::vector<double> input_slots(const Topology& t, const std::vector<double>& features);

/// Per-neuron raw sums before normalization. The weight stream restarts at C
/// on every call and is consumed row-major, (S+1)*P values total.
std::vector<double> reservoir_raw_sums(const std::vector<double>& y, const ChaosParams& p,
                                       const Topology& t);

/// Normalized reservoir layer Sh of length P+1, Sh[0] = 1.
/// Sh[j] = (raw - min_s)/(max_s - min_s) - 0.5 - mean10; a zero-range neuron
/// outputs -0.5 - mean10.
std::vector<double> reservoir_transform(const std::vector<double>& y, const ChaosParams& p,
                                        const ReservoirCoeffs& c, const Topology& t);

ReservoirCoeffs fit_reservoir_coeffs(const Dataset& d, const ChaosParams& p,
                                     const Topology& t);

}  // namespace rbv

#endif
