#include "rbv/quantize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rbv {
namespace {

std::int16_t quantize_value(double v, double factor, const char* tensor, std::size_t index) {
  // llround rounds halfway cases away from zero
  const long long scaled = std::llround(v * factor);
  if (scaled < -32768 || scaled > 32767)
    throw std::runtime_error(std::string("quantize: 16-bit overflow in ") + tensor +
                             " at index " + std::to_string(index) + ": " +
                             std::to_string(scaled));
  return static_cast<std::int16_t>(scaled);
}

}  // namespace

QuantizedModel quantize(const LogNNetModel& m, std::int32_t scale_factor) {
  if (scale_factor <= 0) throw std::invalid_argument("quantize: scale factor must be positive");
  QuantizedModel q;
  q.topology = m.topology;
  q.chaos = m.chaos;
  q.scale_factor = scale_factor;
  const double f = static_cast<double>(scale_factor);
  const auto np = static_cast<std::size_t>(m.topology.p);
  q.q_min_s.resize(np);
  q.q_max_s.resize(np);
  q.q_mean10.resize(np);
  for (std::size_t j = 0; j < np; ++j) {
    q.q_min_s[j] = quantize_value(m.coeffs.min_s[j], f, "minS", j);
    q.q_max_s[j] = quantize_value(m.coeffs.max_s[j], f, "maxS", j);
    q.q_mean10[j] = quantize_value(m.coeffs.mean10[j], f * 10.0, "meanS", j);
  }
  q.q_w1.resize(m.w1.a.size());
  for (std::size_t i = 0; i < m.w1.a.size(); ++i)
    q.q_w1[i] = quantize_value(m.w1.a[i], f, "W1", i);
  q.q_w2.resize(m.w2.a.size());
  for (std::size_t i = 0; i < m.w2.a.size(); ++i)
    q.q_w2[i] = quantize_value(m.w2.a[i], f, "W2", i);
  return q;
}

PredictionOutcome emulate_edge_inference(const QuantizedModel& q,
                                         const std::vector<double>& features) {
  const Topology& t = q.topology;
  if (features.size() != static_cast<std::size_t>(t.s))
    throw std::invalid_argument("emulate_edge_inference: input arity mismatch");
  const auto S = static_cast<std::size_t>(t.s);
  const auto P = static_cast<std::size_t>(t.p);
  const auto M = static_cast<std::size_t>(t.m);
  const auto N = static_cast<std::size_t>(t.n);
  const long K = static_cast<long>(q.chaos.k), D = static_cast<long>(q.chaos.d),
             L = static_cast<long>(q.chaos.l), C = static_cast<long>(q.chaos.c);
  const std::int32_t scale_factor = q.scale_factor;
  const std::size_t w1_cols = M + 1;
  const std::size_t w2_cols = N + 1;

  std::vector<float> Y(S + 1, 0.0f);
  for (std::size_t i = 0; i < S; ++i) Y[i] = static_cast<float>(features[i]);

  // Reservoir
  std::vector<float> Sh(P + 1, 0.0f);
  long W = C;
  Sh[0] = 1;
  for (std::size_t j = 1; j <= P; ++j) {
    Sh[j] = 0;
    for (std::size_t i = 0; i <= S; ++i) {
      W = (D - K * W) % L;
      Sh[j] = Sh[j] + (static_cast<float>(W) / L) * Y[i];
    }
    Sh[j] = static_cast<float>(
        ((Sh[j] - static_cast<float>(q.q_min_s[j - 1]) / scale_factor) /
         (static_cast<float>(q.q_max_s[j - 1] - q.q_min_s[j - 1]) / scale_factor)) -
        0.5 - static_cast<float>(q.q_mean10[j - 1]) / (scale_factor * 10));
  }

  // Hidden layer
  std::vector<float> Sh2(M + 1, 0.0f);
  Sh2[0] = 1;
  for (std::size_t j = 1; j <= M; ++j) {
    Sh2[j] = 0;
    for (std::size_t i = 0; i <= P; ++i)
      Sh2[j] = Sh2[j] + Sh[i] * (static_cast<float>(q.q_w1[i * w1_cols + j]) / scale_factor);
    Sh2[j] = static_cast<float>(1.0 / (1.0 + std::exp(-1.0 * Sh2[j])));
  }

  // Output layer
  std::vector<float> Sout(N + 1, 0.0f);
  for (std::size_t j = 0; j <= N; ++j) {
    Sout[j] = 0;
    for (std::size_t i = 0; i <= M; ++i)
      Sout[j] = Sout[j] + Sh2[i] * (static_cast<float>(q.q_w2[i * w2_cols + j]) / scale_factor);
    Sout[j] = static_cast<float>(1.0 / (1.0 + std::exp(-1.0 * Sout[j])));
  }
  std::size_t digit = 0;
  for (std::size_t j = 0; j <= N; ++j)
    if (Sout[j] > Sout[digit]) digit = j;

  PredictionOutcome out;
  out.predicted_class = static_cast<int>(digit);
  out.activations.assign(Sout.begin(), Sout.end());
  return out;
}

}  // namespace rbv
