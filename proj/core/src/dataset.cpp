#include "rbv/dataset.hpp"

#include <stdexcept>

namespace rbv {

bool Dataset::all_labeled() const {
  for (const auto& r : records)
    if (!r.label) return false;
  return true;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts;
  for (const auto& r : records) {
    if (!r.label) throw std::runtime_error("class_counts: unlabeled record");
    const auto c = static_cast<std::size_t>(*r.label);
    if (counts.size() <= c) counts.resize(c + 1, 0);
    ++counts[c];
  }
  return counts;
}

Dataset Dataset::restrict_features(const std::vector<int>& feature_idx) const {
  Dataset out;
  out.schema_id = schema_id;
  for (int f : feature_idx) {
    if (f < 0 || static_cast<std::size_t>(f) >= feature_names.size())
      throw std::out_of_range("restrict_features: feature index out of range");
    out.feature_names.push_back(feature_names[static_cast<std::size_t>(f)]);
  }
  out.records.reserve(records.size());
  for (const auto& r : records) {
    RbvRecord nr;
    nr.label = r.label;
    nr.values.reserve(feature_idx.size());
    for (int f : feature_idx) nr.values.push_back(r.values[static_cast<std::size_t>(f)]);
    out.records.push_back(std::move(nr));
  }
  return out;
}

const std::vector<std::string>& rbv51_schema() {
  static const std::vector<std::string> names = {
      "CRP",     "D-Dimer",    "Ferritin",   "Fibrinogen", "INR",
      "PT",      "PCT",        "ESR",        "Troponin",   "aPTT",
      "LYM",     "NEU",        "PLT",        "WBC",        "BASO",
      "EOS",     "HCT",        "HGB",        "MCH",        "MCHC",
      "MCV",     "MONO",       "MPV",        "PDW",        "RBC",
      "RDW",     "ALT",        "AST",        "Albumin",    "ALP",
      "Amylase", "CK-MB",      "D-Bil",      "GGT",        "Glucose",
      "HDL-C",   "Calcium",    "Chlorine",   "Cholesterol","Creatinine",
      "CK",      "LDH",        "LDL",        "Potassium",  "Sodium",
      "T-Bil",   "TP",         "Triglyceride","eGFR",      "Urea",
      "UA"};
  return names;
}

void check_arity(const Dataset& d, const RbvRecord& r) {
  if (r.values.size() != d.feature_count())
    throw std::invalid_argument("record arity " + std::to_string(r.values.size()) +
                                " does not match schema arity " +
                                std::to_string(d.feature_count()));
}

}  // namespace rbv
