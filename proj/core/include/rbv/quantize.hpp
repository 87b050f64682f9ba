#ifndef RBV_QUANTIZE_HPP
#define RBV_QUANTIZE_HPP

#include <cstdint>
#include <vector>

#include "rbv/lognnet.hpp"

namespace rbv {

/// Integer form of a LogNNetModel: value * scale_factor rounded
/// half-away-from-zero, mean10 at scale_factor * 10. Every entry must fit a
/// signed 16-bit slot.
struct QuantizedModel {
  Topology topology;
  ChaosParams chaos;
  std::int32_t scale_factor = 1000;
  std::vector<std::int16_t> q_min_s;   // length P
  std::vector<std::int16_t> q_max_s;   // length P
  std::vector<std::int16_t> q_mean10;  // length P
  std::vector<std::int16_t> q_w1;      // (P+1) x (M+1), row-major
  std::vector<std::int16_t> q_w2;      // (M+1) x (N+1), row-major
};

QuantizedModel quantize(const LogNNetModel& m, std::int32_t scale_factor = 1000);

/// Replays the microcontroller inference path: weights dequantized at use
/// sites, all accumulation in 32-bit floats, generator in integer arithmetic
/// with truncated remainder.
PredictionOutcome emulate_edge_inference(const QuantizedModel& q,
                                         const std::vector<double>& features);

}  // namespace rbv

#endif
