#ifndef RBV_LOGNNET_HPP
#define RBV_LOGNNET_HPP

#include <cstdint>
#include <vector>

#include "rbv/dataset.hpp"
#include "rbv/folds.hpp"
#include "rbv/reservoir.hpp"

namespace rbv {

double sigmoid(double x);

/// Dense matrix stored row-major.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

struct LogNNetModel {
  Topology topology;
  ChaosParams chaos;
  ReservoirCoeffs coeffs;
  Matrix w1;  // (P+1) x (M+1); column 0 unused, stored as zeros
  Matrix w2;  // (M+1) x (N+1)
};

struct PredictionOutcome {
  int predicted_class = 0;
  std::vector<double> activations;  // N+1 values in (0,1)
};

PredictionOutcome forward(const LogNNetModel& m, const RbvRecord& r);

struct LogNNetTrainParams {
  int epochs = 30;
  double learning_rate = 0.1;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

LogNNetModel train_lognnet(const Dataset& d, const Topology& t, const ChaosParams& p,
                           const LogNNetTrainParams& h);

/// Mean per-output binary cross-entropy over the batch plus analytic
/// gradients, exposed so the finite-difference check can see them.
struct LossGradients {
  double loss = 0.0;
  Matrix d_w1;
  Matrix d_w2;
};
LossGradients lognnet_loss_gradients(const LogNNetModel& m,
                                     const std::vector<std::vector<double>>& sh_cache,
                                     const std::vector<int>& labels);

/// Reservoir activations for each record, reusable across epochs.
std::vector<std::vector<double>> reservoir_cache(const LogNNetModel& m, const Dataset& d);

CvResult evaluate_lognnet(const Dataset& d, const FoldAssignment& folds, const Topology& t,
                          const ChaosParams& p, const LogNNetTrainParams& h);

}  // namespace rbv

#endif
