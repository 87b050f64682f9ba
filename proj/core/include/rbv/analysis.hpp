#ifndef RBV_ANALYSIS_HPP
#define RBV_ANALYSIS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rbv/dataset.hpp"
#include "rbv/folds.hpp"

namespace rbv {

enum class CorrelationScope { All, PositiveClass, NegativeClass };

struct CorrelationMatrix {
  std::vector<std::string> labels;  // feature names plus `diagnosis` when labeled
  std::vector<std::vector<double>> r;
  std::vector<std::vector<bool>> defined;  // false where a column is constant

  double at(std::size_t i, std::size_t j) const { return r[i][j]; }
};

CorrelationMatrix pearson_matrix(const Dataset& d, CorrelationScope scope = CorrelationScope::All);

/// Pearson coefficient of two equal-length columns. `defined` is false when
/// either column is constant.
double pearson(const std::vector<double>& x, const std::vector<double>& y, bool* defined = nullptr);

struct ThresholdRule {
  double threshold = 0.0;
  bool predict_one_above = true;
  double accuracy = 0.0;
};

/// Exhaustive scan over midpoints of adjacent sorted distinct values, both
/// polarities. Ties: lower threshold first, then predict-1-above.
ThresholdRule threshold_classify(const Dataset& d, std::size_t feature);

struct SubsetResult {
  std::vector<int> features;  // strictly increasing
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

/// Evaluates every strictly increasing index tuple of the given size by
/// restricted-feature cross-validation. Per-tuple seeds are derived from the
/// tuple so rankings are independent of evaluation order and worker count.
std::vector<SubsetResult> subset_search(const Dataset& d, int size, const Trainer& trainer,
                                        const FoldAssignment& folds, std::size_t top_k,
                                        int workers = 1);

struct PairGraph {
  // feature index -> (partner feature -> co-occurrence count in the top list)
  std::map<int, std::map<int, int>> partners;
  // features sorted by degree descending, then index ascending
  std::vector<std::pair<int, int>> hubs;
};

PairGraph top_pairs_graph(const std::vector<SubsetResult>& results, std::size_t n);

std::string correlation_csv(const CorrelationMatrix& m);
std::string subset_results_csv(const std::vector<SubsetResult>& results,
                               const std::vector<std::string>& feature_names);

}  // namespace rbv

#endif
