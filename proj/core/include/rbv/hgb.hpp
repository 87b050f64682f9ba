#ifndef RBV_HGB_HPP
#define RBV_HGB_HPP

#include <cstdint>
#include <vector>

#include "rbv/dataset.hpp"

namespace rbv {

/// Per-feature strictly increasing thresholds; bin index of x = number of
/// thresholds < x.
struct BinMapper {
  int max_bins = 255;
  std::vector<std::vector<double>> thresholds;

  int bin(std::size_t feature, double x) const;
  int bin_count(std::size_t feature) const {
    return static_cast<int>(thresholds[feature].size()) + 1;
  }
};

BinMapper fit_bins(const Dataset& d, int max_bins = 255);

struct HgbNode {
  bool is_leaf = true;
  int feature = -1;
  int split_bin = -1;  // goes left when bin(x) <= split_bin
  int left = -1;
  int right = -1;
  double value = 0.0;  // additive log-odds at a leaf
};

struct HgbTree {
  std::vector<HgbNode> nodes;  // nodes[0] is the root
};

struct HgbParams {
  int trees = 100;
  double learning_rate = 0.1;
  int max_leaves = 31;
  int min_samples_leaf = 20;
  double l2 = 1.0;
  int max_bins = 255;
  std::uint64_t seed = 0;
};

struct HgbModel {
  BinMapper bins;
  std::vector<HgbTree> trees;
  HgbParams params;
  double base_score = 0.0;  // prior log-odds
  std::size_t n_features = 0;
  std::vector<double> round_losses;  // training logistic loss after each round
};

HgbModel train_hgb(const Dataset& d, const HgbParams& params = {});

struct HgbPrediction {
  int predicted_class = 0;
  double probability = 0.0;
};

HgbPrediction predict_hgb(const HgbModel& m, const RbvRecord& r);

/// base_score + learning_rate * sum of leaf values, before the sigmoid.
double hgb_raw_score(const HgbModel& m, const std::vector<double>& x);

}  // namespace rbv

#endif
