#ifndef RBV_FOLDS_HPP
#define RBV_FOLDS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "rbv/dataset.hpp"

namespace rbv {

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold_of_record;
};

/// Seeded per-class shuffle, then a round-robin walk over folds that carries
/// its position from one class to the next so total fold sizes stay within 1.
FoldAssignment stratified_folds(const Dataset& d, int k, std::uint64_t seed);

struct CvResult {
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

/// trainer(train_set, seed) returns a predictor mapping a record to a class.
using Predictor = std::function<int(const RbvRecord&)>;
using Trainer = std::function<Predictor(const Dataset&, std::uint64_t)>;

CvResult cross_validate(const Dataset& d, const FoldAssignment& folds, const Trainer& trainer,
                        std::uint64_t seed);

}  // namespace rbv

#endif
