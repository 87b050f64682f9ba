#include "rbv/hgb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rbv {

int BinMapper::bin(std::size_t feature, double x) const {
  const auto& th = thresholds[feature];
  // count of thresholds strictly below x
  return static_cast<int>(std::lower_bound(th.begin(), th.end(), x) - th.begin());
}

BinMapper fit_bins(const Dataset& d, int max_bins) {
  if (d.records.empty()) throw std::runtime_error("fit_bins: empty dataset");
  if (max_bins < 2) throw std::invalid_argument("fit_bins: max_bins must be >= 2");
  BinMapper m;
  m.max_bins = max_bins;
  const std::size_t nf = d.feature_count();
  m.thresholds.resize(nf);
  std::vector<double> col(d.records.size());
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t i = 0; i < d.records.size(); ++i) col[i] = d.records[i].values[f];
    std::sort(col.begin(), col.end());
    std::vector<double> distinct;
    for (double v : col)
      if (distinct.empty() || v != distinct.back()) distinct.push_back(v);
    auto& th = m.thresholds[f];
    if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
      for (std::size_t i = 1; i < distinct.size(); ++i)
        th.push_back((distinct[i - 1] + distinct[i]) / 2.0);
    } else {
      // quantile thresholds over the full (duplicated) column
      const std::size_t n = col.size();
      for (int b = 1; b < max_bins; ++b) {
        const std::size_t rank = n * static_cast<std::size_t>(b) / static_cast<std::size_t>(max_bins);
        if (rank == 0 || rank >= n) continue;
        const double t = (col[rank - 1] + col[rank]) / 2.0;
        if (th.empty() || t > th.back()) th.push_back(t);
      }
    }
  }
  return m;
}

namespace {

struct BinStats {
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
};

struct SplitChoice {
  bool found = false;
  int feature = -1;
  int bin = -1;
  double gain = 0.0;
};

double leaf_objective(double g, double h, double l2) { return g * g / (h + l2); }

struct Leaf {
  std::vector<std::uint32_t> samples;
  double g_sum = 0.0;
  double h_sum = 0.0;
  double value = 0.0;
  SplitChoice split;
  int node_index = -1;
};

// Exact-gain argmax over histogram bins; ties resolved by lowest feature,
// then lowest bin.
SplitChoice find_best_split(const Leaf& leaf,
                            const std::vector<std::vector<std::uint16_t>>& binned,
                            const BinMapper& bins, const std::vector<double>& grad,
                            const std::vector<double>& hess, const HgbParams& params) {
  SplitChoice best;
  const std::size_t nf = bins.thresholds.size();
  const double parent = leaf_objective(leaf.g_sum, leaf.h_sum, params.l2);
  std::vector<BinStats> hist;
  for (std::size_t f = 0; f < nf; ++f) {
    const int nb = bins.bin_count(f);
    if (nb < 2) continue;
    hist.assign(static_cast<std::size_t>(nb), BinStats{});
    for (std::uint32_t idx : leaf.samples) {
      auto& cell = hist[binned[idx][f]];
      cell.g += grad[idx];
      cell.h += hess[idx];
      ++cell.count;
    }
    double gl = 0.0, hl = 0.0;
    std::size_t cl = 0;
    for (int b = 0; b + 1 < nb; ++b) {
      const auto& cell = hist[static_cast<std::size_t>(b)];
      gl += cell.g;
      hl += cell.h;
      cl += cell.count;
      const std::size_t cr = leaf.samples.size() - cl;
      if (cl < static_cast<std::size_t>(params.min_samples_leaf) ||
          cr < static_cast<std::size_t>(params.min_samples_leaf))
        continue;
      const double gr = leaf.g_sum - gl;
      const double hr = leaf.h_sum - hl;
      const double gain = 0.5 * (leaf_objective(gl, hl, params.l2) +
                                 leaf_objective(gr, hr, params.l2) - parent);
      if (!best.found || gain > best.gain) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.bin = b;
        best.gain = gain;
      }
    }
  }
  if (best.found && best.gain <= 0.0) best.found = false;
  return best;
}

}  // namespace

HgbModel train_hgb(const Dataset& d, const HgbParams& params) {
  if (params.trees <= 0 || params.learning_rate <= 0.0 || params.max_leaves < 2 ||
      params.min_samples_leaf < 1 || params.l2 < 0.0 || params.max_bins < 2)
    throw std::invalid_argument("train_hgb: invalid params");
  if (!d.all_labeled()) throw std::runtime_error("train_hgb: unlabeled record");
  const std::size_t n = d.records.size();
  if (n < 2 * static_cast<std::size_t>(params.min_samples_leaf))
    throw std::runtime_error("train_hgb: dataset smaller than 2 * min_samples_leaf");
  std::size_t pos = 0;
  for (const auto& r : d.records) pos += static_cast<std::size_t>(*r.label == 1);
  if (pos == 0 || pos == n) throw std::runtime_error("train_hgb: single-class dataset");

  HgbModel m;
  m.params = params;
  m.n_features = d.feature_count();
  m.bins = fit_bins(d, params.max_bins);
  m.base_score = std::log(static_cast<double>(pos) / static_cast<double>(n - pos));

  // Pre-binned feature matrix
  std::vector<std::vector<std::uint16_t>> binned(n,
                                                 std::vector<std::uint16_t>(m.n_features));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < m.n_features; ++f)
      binned[i][f] = static_cast<std::uint16_t>(m.bins.bin(f, d.records[i].values[f]));

  std::vector<double> score(n, m.base_score);
  std::vector<double> grad(n), hess(n);

  auto train_loss = [&]() {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = 1.0 / (1.0 + std::exp(-score[i]));
      const double y = *d.records[i].label;
      loss += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
    }
    return loss / static_cast<double>(n);
  };

  for (int round = 0; round < params.trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = 1.0 / (1.0 + std::exp(-score[i]));
      grad[i] = p - static_cast<double>(*d.records[i].label);
      hess[i] = p * (1.0 - p);
    }

    HgbTree tree;
    std::vector<Leaf> leaves;
    Leaf root;
    root.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) root.samples[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < n; ++i) {
      root.g_sum += grad[i];
      root.h_sum += hess[i];
    }
    root.value = -root.g_sum / (root.h_sum + params.l2);
    root.split = find_best_split(root, binned, m.bins, grad, hess, params);
    root.node_index = 0;
    tree.nodes.push_back(HgbNode{true, -1, -1, -1, -1, root.value});
    leaves.push_back(std::move(root));

    while (static_cast<int>(leaves.size()) < params.max_leaves) {
      // best-first: expand the open leaf with the largest gain
      int pick = -1;
      for (std::size_t i = 0; i < leaves.size(); ++i)
        if (leaves[i].split.found &&
            (pick < 0 || leaves[i].split.gain > leaves[static_cast<std::size_t>(pick)].split.gain))
          pick = static_cast<int>(i);
      if (pick < 0) break;

      Leaf parent = std::move(leaves[static_cast<std::size_t>(pick)]);
      leaves.erase(leaves.begin() + pick);

      Leaf left, right;
      for (std::uint32_t idx : parent.samples) {
        if (binned[idx][static_cast<std::size_t>(parent.split.feature)] <=
            parent.split.bin) {
          left.samples.push_back(idx);
          left.g_sum += grad[idx];
          left.h_sum += hess[idx];
        } else {
          right.samples.push_back(idx);
          right.g_sum += grad[idx];
          right.h_sum += hess[idx];
        }
      }
      left.value = -left.g_sum / (left.h_sum + params.l2);
      right.value = -right.g_sum / (right.h_sum + params.l2);
      left.node_index = static_cast<int>(tree.nodes.size());
      right.node_index = static_cast<int>(tree.nodes.size()) + 1;
      tree.nodes.push_back(HgbNode{true, -1, -1, -1, -1, left.value});
      tree.nodes.push_back(HgbNode{true, -1, -1, -1, -1, right.value});

      auto& pn = tree.nodes[static_cast<std::size_t>(parent.node_index)];
      pn.is_leaf = false;
      pn.feature = parent.split.feature;
      pn.split_bin = parent.split.bin;
      pn.left = left.node_index;
      pn.right = right.node_index;

      left.split = find_best_split(left, binned, m.bins, grad, hess, params);
      right.split = find_best_split(right, binned, m.bins, grad, hess, params);
      leaves.push_back(std::move(left));
      leaves.push_back(std::move(right));
    }

    for (const auto& leaf : leaves)
      for (std::uint32_t idx : leaf.samples)
        score[idx] += params.learning_rate * leaf.value;

    m.trees.push_back(std::move(tree));
    m.round_losses.push_back(train_loss());
  }
  return m;
}

double hgb_raw_score(const HgbModel& m, const std::vector<double>& x) {
  if (x.size() != m.n_features)
    throw std::invalid_argument("hgb: input arity " + std::to_string(x.size()) +
                                " does not match model arity " + std::to_string(m.n_features));
  double sum = 0.0;
  for (const auto& tree : m.trees) {
    const HgbNode* node = &tree.nodes[0];
    while (!node->is_leaf) {
      const int b = m.bins.bin(static_cast<std::size_t>(node->feature),
                               x[static_cast<std::size_t>(node->feature)]);
      node = &tree.nodes[static_cast<std::size_t>(b <= node->split_bin ? node->left
                                                                       : node->right)];
    }
    sum += node->value;
  }
  return m.base_score + m.params.learning_rate * sum;
}

HgbPrediction predict_hgb(const HgbModel& m, const RbvRecord& r) {
  const double z = hgb_raw_score(m, r.values);
  HgbPrediction p;
  p.probability = 1.0 / (1.0 + std::exp(-z));
  p.predicted_class = p.probability >= 0.5 ? 1 : 0;
  return p;
}

}  // namespace rbv
