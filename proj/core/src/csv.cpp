#include "rbv/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rbv {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool is_missing(const std::string& cell, const CsvOptions& opts) {
  if (cell.empty()) return true;
  return std::find(opts.missing_sentinels.begin(), opts.missing_sentinels.end(), cell) !=
         opts.missing_sentinels.end();
}

double parse_number(const std::string& cell, std::size_t row, std::size_t col,
                    const std::string& col_name) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw std::runtime_error("parse error at row " + std::to_string(row) + ", column '" +
                             col_name + "' (index " + std::to_string(col) +
                             "): not a number: '" + cell + "'");
  return v;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::vector<std::string>& schema,
                 const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  const auto header = split_line(line);

  // Map schema name -> column position in the file; `label` handled apart.
  std::vector<int> col_of_feature(schema.size(), -1);
  int label_col = -1;
  std::vector<std::string> unknown;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = trim(header[c]);
    if (name == "label") {
      label_col = static_cast<int>(c);
      continue;
    }
    auto it = std::find(schema.begin(), schema.end(), name);
    if (it == schema.end()) {
      unknown.push_back(name);
    } else {
      col_of_feature[static_cast<std::size_t>(it - schema.begin())] = static_cast<int>(c);
    }
  }
  std::vector<std::string> missing_cols;
  for (std::size_t f = 0; f < schema.size(); ++f)
    if (col_of_feature[f] < 0) missing_cols.push_back(schema[f]);
  if (!unknown.empty() || !missing_cols.empty()) {
    std::string msg = "schema error in " + path + ":";
    if (!missing_cols.empty()) {
      msg += " missing columns:";
      for (const auto& n : missing_cols) msg += " " + n;
      msg += ";";
    }
    if (!unknown.empty()) {
      msg += " unknown columns:";
      for (const auto& n : unknown) msg += " " + n;
    }
    throw std::runtime_error(msg);
  }

  Dataset d;
  d.feature_names = schema;
  d.schema_id = "csv:" + path;

  // First pass kept in memory: cells as parsed numbers, NaN = missing.
  std::vector<std::vector<double>> rows;
  std::vector<std::optional<int>> labels;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error("row " + std::to_string(row_no) + " has " +
                               std::to_string(cells.size()) + " cells, header has " +
                               std::to_string(header.size()));
    std::vector<double> vals(schema.size());
    for (std::size_t f = 0; f < schema.size(); ++f) {
      const std::string cell = trim(cells[static_cast<std::size_t>(col_of_feature[f])]);
      if (is_missing(cell, opts)) {
        vals[f] = std::nan("");
      } else {
        vals[f] = parse_number(cell, row_no, static_cast<std::size_t>(col_of_feature[f]),
                               schema[f]);
      }
    }
    std::optional<int> label;
    if (label_col >= 0) {
      const std::string cell = trim(cells[static_cast<std::size_t>(label_col)]);
      if (!is_missing(cell, opts)) {
        if (cell != "0" && cell != "1")
          throw std::runtime_error("row " + std::to_string(row_no) +
                                   ": label must be 0 or 1, got '" + cell + "'");
        label = cell == "1" ? 1 : 0;
      }
    }
    rows.push_back(std::move(vals));
    labels.push_back(label);
  }

  // Column means over present values, then imputation.
  for (std::size_t f = 0; f < schema.size(); ++f) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows)
      if (!std::isnan(r[f])) {
        sum += r[f];
        ++n;
      }
    bool any_missing = n != rows.size();
    if (any_missing && n == 0)
      throw std::runtime_error("ingestion error: column '" + schema[f] +
                               "' has no present values to impute from");
    if (any_missing) {
      const double mean = sum / static_cast<double>(n);
      for (auto& r : rows)
        if (std::isnan(r[f])) r[f] = mean;
    }
  }

  d.records.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    d.records.push_back(RbvRecord{std::move(rows[i]), labels[i]});
  return d;
}

void save_csv(const std::string& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  const bool labeled = d.all_labeled() && !d.records.empty();
  for (std::size_t f = 0; f < d.feature_names.size(); ++f) {
    if (f) out << ',';
    out << d.feature_names[f];
  }
  if (labeled) out << ",label";
  out << '\n';
  char buf[64];
  for (const auto& r : d.records) {
    for (std::size_t f = 0; f < r.values.size(); ++f) {
      if (f) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", r.values[f]);
      out << buf;
    }
    if (labeled) out << ',' << *r.label;
    out << '\n';
  }
}

}  // namespace rbv
