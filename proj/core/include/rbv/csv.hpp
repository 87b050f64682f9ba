#ifndef RBV_CSV_HPP
#define RBV_CSV_HPP

#include <string>
#include <vector>

#include "rbv/dataset.hpp"

namespace rbv {

struct CsvOptions {
  // Cells equal to any of these (after trimming) count as missing and are
  // replaced by the column mean over present values. The empty cell is
  // always a missing marker.
  std::vector<std::string> missing_sentinels = {"NA"};
};

/// Loads a comma-separated file whose header must contain exactly the given
/// schema names (any order; columns are reordered to schema order) plus an
/// optional `label` column with values 0/1.
Dataset load_csv(const std::string& path, const std::vector<std::string>& schema,
                 const CsvOptions& opts = {});

/// Writes a dataset back out, `label` column last when all records carry one.
/// Values are printed with round-trip precision.
void save_csv(const std::string& path, const Dataset& d);

}  // namespace rbv

#endif
