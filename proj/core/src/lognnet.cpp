#include "rbv/lognnet.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace rbv {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-1.0 * x)); }

namespace {

// Hidden and output activations from a reservoir layer.
void dense_forward(const LogNNetModel& m, const std::vector<double>& sh,
                   std::vector<double>& sh2, std::vector<double>& sout) {
  const auto np = static_cast<std::size_t>(m.topology.p);
  const auto nm = static_cast<std::size_t>(m.topology.m);
  const auto nn = static_cast<std::size_t>(m.topology.n);
  sh2.assign(nm + 1, 0.0);
  sh2[0] = 1.0;
  for (std::size_t j = 1; j <= nm; ++j) {
    double z = 0.0;
    for (std::size_t i = 0; i <= np; ++i) z += sh[i] * m.w1.at(i, j);
    sh2[j] = sigmoid(z);
  }
  sout.assign(nn + 1, 0.0);
  for (std::size_t j = 0; j <= nn; ++j) {
    double z = 0.0;
    for (std::size_t i = 0; i <= nm; ++i) z += sh2[i] * m.w2.at(i, j);
    sout[j] = sigmoid(z);
  }
}

int argmax_lowest(const std::vector<double>& v) {
  int best = 0;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j] > v[best]) best = static_cast<int>(j);
  return best;
}

}  // namespace

PredictionOutcome forward(const LogNNetModel& m, const RbvRecord& r) {
  const auto y = input_slots(m.topology, r.values);
  const auto sh = reservoir_transform(y, m.chaos, m.coeffs, m.topology);
  std::vector<double> sh2, sout;
  dense_forward(m, sh, sh2, sout);
  PredictionOutcome out;
  out.activations = std::move(sout);
  out.predicted_class = argmax_lowest(out.activations);
  return out;
}

std::vector<std::vector<double>> reservoir_cache(const LogNNetModel& m, const Dataset& d) {
  std::vector<std::vector<double>> cache;
  cache.reserve(d.records.size());
  for (const auto& r : d.records)
    cache.push_back(reservoir_transform(input_slots(m.topology, r.values), m.chaos,
                                        m.coeffs, m.topology));
  return cache;
}

LossGradients lognnet_loss_gradients(const LogNNetModel& m,
                                     const std::vector<std::vector<double>>& sh_cache,
                                     const std::vector<int>& labels) {
  if (sh_cache.size() != labels.size() || sh_cache.empty())
    throw std::invalid_argument("lognnet_loss_gradients: batch mismatch or empty");
  const auto np = static_cast<std::size_t>(m.topology.p);
  const auto nm = static_cast<std::size_t>(m.topology.m);
  const auto nn = static_cast<std::size_t>(m.topology.n);

  LossGradients g;
  g.d_w1 = Matrix(np + 1, nm + 1);
  g.d_w2 = Matrix(nm + 1, nn + 1);
  const double inv_b = 1.0 / static_cast<double>(sh_cache.size());

  std::vector<double> sh2, sout, dz2(nn + 1), dsh2(nm + 1);
  for (std::size_t b = 0; b < sh_cache.size(); ++b) {
    const auto& sh = sh_cache[b];
    dense_forward(m, sh, sh2, sout);
    for (std::size_t j = 0; j <= nn; ++j) {
      const double t = labels[b] == static_cast<int>(j) ? 1.0 : 0.0;
      const double a = sout[j];
      g.loss += -inv_b * (t * std::log(a) + (1.0 - t) * std::log(1.0 - a));
      dz2[j] = inv_b * (a - t);
    }
    for (std::size_t i = 0; i <= nm; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= nn; ++j) {
        g.d_w2.at(i, j) += sh2[i] * dz2[j];
        acc += m.w2.at(i, j) * dz2[j];
      }
      dsh2[i] = acc;
    }
    for (std::size_t j = 1; j <= nm; ++j) {
      const double dz1 = dsh2[j] * sh2[j] * (1.0 - sh2[j]);
      for (std::size_t i = 0; i <= np; ++i) g.d_w1.at(i, j) += sh[i] * dz1;
    }
  }
  // column 0 of w1 is unused by inference; keep its gradient zero
  for (std::size_t i = 0; i <= np; ++i) g.d_w1.at(i, 0) = 0.0;
  return g;
}

LogNNetModel train_lognnet(const Dataset& d, const Topology& t, const ChaosParams& p,
                           const LogNNetTrainParams& h) {
  validate(t);
  if (!d.all_labeled()) throw std::runtime_error("train_lognnet: unlabeled record");
  if (h.epochs <= 0) throw std::invalid_argument("train_lognnet: epochs must be positive");
  if (h.learning_rate <= 0.0)
    throw std::invalid_argument("train_lognnet: learning rate must be positive");
  if (h.batch_size <= 0) throw std::invalid_argument("train_lognnet: batch size must be positive");

  LogNNetModel m;
  m.topology = t;
  m.chaos = p;
  m.coeffs = fit_reservoir_coeffs(d, p, t);
  const auto np = static_cast<std::size_t>(t.p);
  const auto nm = static_cast<std::size_t>(t.m);
  const auto nn = static_cast<std::size_t>(t.n);
  m.w1 = Matrix(np + 1, nm + 1);
  m.w2 = Matrix(nm + 1, nn + 1);

  std::mt19937_64 rng(h.seed);
  std::uniform_real_distribution<double> init(-0.5, 0.5);
  for (std::size_t i = 0; i <= np; ++i)
    for (std::size_t j = 1; j <= nm; ++j) m.w1.at(i, j) = init(rng);
  for (auto& w : m.w2.a) w = init(rng);

  const auto cache = reservoir_cache(m, d);
  std::vector<std::size_t> order(d.records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int e = 0; e < h.epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(h.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(h.batch_size));
      std::vector<std::vector<double>> batch;
      std::vector<int> labels;
      batch.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(cache[order[i]]);
        labels.push_back(*d.records[order[i]].label);
      }
      const auto g = lognnet_loss_gradients(m, batch, labels);
      for (std::size_t i = 0; i < m.w1.a.size(); ++i) m.w1.a[i] -= h.learning_rate * g.d_w1.a[i];
      for (std::size_t i = 0; i < m.w2.a.size(); ++i) m.w2.a[i] -= h.learning_rate * g.d_w2.a[i];
    }
  }
  return m;
}

CvResult evaluate_lognnet(const Dataset& d, const FoldAssignment& folds, const Topology& t,
                          const ChaosParams& p, const LogNNetTrainParams& h) {
  Trainer trainer = [&t, &p, &h](const Dataset& train, std::uint64_t seed) -> Predictor {
    LogNNetTrainParams hp = h;
    hp.seed = seed;
    auto model = train_lognnet(train, t, p, hp);
    return [model](const RbvRecord& r) { return forward(model, r).predicted_class; };
  };
  return cross_validate(d, folds, trainer, h.seed);
}

}  // namespace rbv
