#include "rbv/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rbv {

double pearson(const std::vector<double>& x, const std::vector<double>& y, bool* defined) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pearson: need two equal-length columns with >= 2 rows");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    if (defined) *defined = false;
    return 0.0;
  }
  if (defined) *defined = true;
  return sxy / std::sqrt(sxx * syy);
}

CorrelationMatrix pearson_matrix(const Dataset& d, CorrelationScope scope) {
  std::vector<const RbvRecord*> rows;
  for (const auto& r : d.records) {
    if (scope != CorrelationScope::All) {
      if (!r.label) throw std::runtime_error("pearson_matrix: class scope needs labels");
      const int want = scope == CorrelationScope::PositiveClass ? 1 : 0;
      if (*r.label != want) continue;
    }
    rows.push_back(&r);
  }
  if (rows.size() < 2) throw std::runtime_error("pearson_matrix: scope has fewer than 2 records");

  const bool with_diagnosis =
      scope == CorrelationScope::All && !d.records.empty() && d.all_labeled();
  const std::size_t nf = d.feature_count();
  const std::size_t nc = nf + (with_diagnosis ? 1 : 0);

  std::vector<std::vector<double>> cols(nc, std::vector<double>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t f = 0; f < nf; ++f) cols[f][i] = rows[i]->values[f];
    if (with_diagnosis) cols[nf][i] = static_cast<double>(*rows[i]->label);
  }

  CorrelationMatrix m;
  m.labels = d.feature_names;
  if (with_diagnosis) m.labels.push_back("diagnosis");
  m.r.assign(nc, std::vector<double>(nc, 0.0));
  m.defined.assign(nc, std::vector<bool>(nc, false));

  std::vector<bool> constant(nc);
  for (std::size_t c = 0; c < nc; ++c)
    constant[c] = std::all_of(cols[c].begin(), cols[c].end(),
                              [&](double v) { return v == cols[c][0]; });

  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = i; j < nc; ++j) {
      if (constant[i] || constant[j]) continue;  // left flagged undefined
      bool def = true;
      const double r = i == j ? 1.0 : pearson(cols[i], cols[j], &def);
      m.r[i][j] = m.r[j][i] = r;
      m.defined[i][j] = m.defined[j][i] = def;
    }
  }
  return m;
}

ThresholdRule threshold_classify(const Dataset& d, std::size_t feature) {
  if (feature >= d.feature_count())
    throw std::out_of_range("threshold_classify: feature index out of range");
  if (!d.all_labeled()) throw std::runtime_error("threshold_classify: unlabeled record");
  std::vector<std::pair<double, int>> samples;
  samples.reserve(d.records.size());
  for (const auto& r : d.records) samples.emplace_back(r.values[feature], *r.label);
  std::sort(samples.begin(), samples.end());
  if (samples.front().first == samples.back().first)
    throw std::runtime_error("threshold_classify: constant feature");

  const std::size_t n = samples.size();
  // prefix_one[i] = count of label-1 among the first i samples (sorted)
  std::vector<std::size_t> prefix_one(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    prefix_one[i + 1] = prefix_one[i] + static_cast<std::size_t>(samples[i].second == 1);
  const std::size_t total_one = prefix_one[n];

  // candidate cuts: below all values, midpoints of adjacent distinct values,
  // above all values; the boundary cuts realize the degenerate majority rule
  std::vector<std::pair<double, std::size_t>> cuts;  // (threshold, #samples below)
  cuts.emplace_back(samples.front().first - 1.0, 0);
  for (std::size_t i = 1; i < n; ++i)
    if (samples[i].first != samples[i - 1].first)
      cuts.emplace_back((samples[i - 1].first + samples[i].first) / 2.0, i);
  cuts.emplace_back(samples.back().first + 1.0, n);

  ThresholdRule best;
  best.accuracy = -1.0;
  for (const auto& [t, below] : cuts) {
    const std::size_t ones_below = prefix_one[below];
    // predict-1-above: correct = zeros below + ones above
    const std::size_t correct_above = (below - ones_below) + (total_one - ones_below);
    // predict-1-below: the complement
    const std::size_t correct_below = n - correct_above;
    const double acc_above = static_cast<double>(correct_above) / static_cast<double>(n);
    const double acc_below = static_cast<double>(correct_below) / static_cast<double>(n);
    if (acc_above > best.accuracy) best = {t, true, acc_above};
    if (acc_below > best.accuracy) best = {t, false, acc_below};
  }
  return best;
}

namespace {

std::uint64_t tuple_seed(const std::vector<int>& tuple) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (int v : tuple) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ull;
  }
  return h;
}

void enumerate_tuples(std::size_t nf, int size, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(static_cast<std::size_t>(size));
  auto rec = [&](auto&& self, int depth, int start) -> void {
    if (depth == size) {
      out.push_back(cur);
      return;
    }
    for (int f = start; f < static_cast<int>(nf); ++f) {
      cur[static_cast<std::size_t>(depth)] = f;
      self(self, depth + 1, f + 1);
    }
  };
  rec(rec, 0, 0);
}

}  // namespace

std::vector<SubsetResult> subset_search(const Dataset& d, int size, const Trainer& trainer,
                                        const FoldAssignment& folds, std::size_t top_k,
                                        int workers) {
  if (size < 1 || size > 3)
    throw std::invalid_argument("subset_search: size must be 1, 2 or 3");
  if (top_k == 0) throw std::invalid_argument("subset_search: top_k must be positive");
  if (workers < 1) workers = 1;

  std::vector<std::vector<int>> tuples;
  enumerate_tuples(d.feature_count(), size, tuples);

  std::vector<SubsetResult> results(tuples.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tuples.size()) return;
      const auto& tuple = tuples[i];
      const Dataset sub = d.restrict_features(tuple);
      const auto cv = cross_validate(sub, folds, trainer, tuple_seed(tuple));
      results[i] = SubsetResult{tuple, cv.mean_accuracy, cv.fold_accuracies};
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::sort(results.begin(), results.end(), [](const SubsetResult& a, const SubsetResult& b) {
    if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
    return a.features < b.features;
  });
  if (results.size() > top_k) results.resize(top_k);
  return results;
}

PairGraph top_pairs_graph(const std::vector<SubsetResult>& results, std::size_t n) {
  PairGraph g;
  const std::size_t limit = std::min(n, results.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (results[i].features.size() != 2)
      throw std::invalid_argument("top_pairs_graph: results must be feature pairs");
    const int a = results[i].features[0], b = results[i].features[1];
    ++g.partners[a][b];
    ++g.partners[b][a];
  }
  for (const auto& [feature, partners] : g.partners)
    g.hubs.emplace_back(feature, static_cast<int>(partners.size()));
  std::sort(g.hubs.begin(), g.hubs.end(), [](auto& a, auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return g;
}

std::string correlation_csv(const CorrelationMatrix& m) {
  std::ostringstream os;
  char buf[64];
  for (const auto& l : m.labels) os << ',' << l;
  os << '\n';
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    os << m.labels[i];
    for (std::size_t j = 0; j < m.labels.size(); ++j) {
      os << ',';
      if (m.defined[i][j]) {
        std::snprintf(buf, sizeof(buf), "%.10g", m.r[i][j]);
        os << buf;
      } else {
        os << "undefined";
      }
    }
    os << '\n';
  }
  return os.str();
}

std::string subset_results_csv(const std::vector<SubsetResult>& results,
                               const std::vector<std::string>& feature_names) {
  std::ostringstream os;
  char buf[64];
  os << "features,mean_accuracy,fold_accuracies\n";
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.features.size(); ++i) {
      if (i) os << '+';
      os << feature_names[static_cast<std::size_t>(r.features[i])];
    }
    std::snprintf(buf, sizeof(buf), "%.6f", r.mean_accuracy);
    os << ',' << buf << ',';
    for (std::size_t i = 0; i < r.fold_accuracies.size(); ++i) {
      if (i) os << ';';
      std::snprintf(buf, sizeof(buf), "%.6f", r.fold_accuracies[i]);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace rbv
