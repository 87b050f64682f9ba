#ifndef RBV_DATASET_HPP
#define RBV_DATASET_HPP

#include <optional>
#include <string>
#include <vector>

namespace rbv {

/// One blood-value vector. `values` follows the schema order of the owning
/// Dataset; `label` is 1 = positive, 0 = negative when present.
struct RbvRecord {
  std::vector<double> values;
  std::optional<int> label;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<RbvRecord> records;
  std::string schema_id;

  std::size_t feature_count() const { return feature_names.size(); }
  std::size_t size() const { return records.size(); }

  bool all_labeled() const;
  // counts[c] = number of records with label c
  std::vector<std::size_t> class_counts() const;
  // Keeps only the listed feature columns, in the given order.
  Dataset restrict_features(const std::vector<int>& feature_idx) const;
};

// The 51-feature schema of the SARS-CoV-2-RBV1 layout, in table order.
const std::vector<std::string>& rbv51_schema();

void check_arity(const Dataset& d, const RbvRecord& r);

}  // namespace rbv

#endif
