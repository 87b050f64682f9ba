#include "rbv/folds.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace rbv {

FoldAssignment stratified_folds(const Dataset& d, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_folds: k must be >= 2");
  if (!d.all_labeled()) throw std::runtime_error("stratified_folds: unlabeled record present");
  const auto counts = d.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] < static_cast<std::size_t>(k))
      throw std::runtime_error("stratified_folds: class " + std::to_string(c) + " has " +
                               std::to_string(counts[c]) + " members, fewer than k=" +
                               std::to_string(k));

  std::vector<std::vector<std::size_t>> by_class(counts.size());
  for (std::size_t i = 0; i < d.records.size(); ++i)
    by_class[static_cast<std::size_t>(*d.records[i].label)].push_back(i);

  std::mt19937_64 rng(seed);
  FoldAssignment fa;
  fa.k = k;
  fa.fold_of_record.assign(d.records.size(), -1);
  std::size_t pos = 0;  // round-robin position shared across classes
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t idx : members) fa.fold_of_record[idx] = static_cast<int>(pos++ % k);
  }
  return fa;
}

CvResult cross_validate(const Dataset& d, const FoldAssignment& folds, const Trainer& trainer,
                        std::uint64_t seed) {
  if (folds.fold_of_record.size() != d.records.size())
    throw std::invalid_argument("cross_validate: fold assignment does not match dataset");
  CvResult res;
  for (int f = 0; f < folds.k; ++f) {
    Dataset train;
    train.feature_names = d.feature_names;
    train.schema_id = d.schema_id;
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < d.records.size(); ++i) {
      if (folds.fold_of_record[i] == f)
        test_idx.push_back(i);
      else
        train.records.push_back(d.records[i]);
    }
    auto predict = trainer(train, seed + static_cast<std::uint64_t>(f));
    std::size_t correct = 0;
    for (std::size_t i : test_idx)
      if (predict(d.records[i]) == *d.records[i].label) ++correct;
    res.fold_accuracies.push_back(test_idx.empty()
                                      ? 0.0
                                      : static_cast<double>(correct) /
                                            static_cast<double>(test_idx.size()));
  }
  double sum = 0.0;
  for (double a : res.fold_accuracies) sum += a;
  res.mean_accuracy = res.fold_accuracies.empty() ? 0.0 : sum / res.fold_accuracies.size();
  return res;
}

}  // namespace rbv
