#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rbv/lognnet.hpp"
#include "rbv/synthetic.hpp"

using namespace rbv;

namespace {

Dataset labeled_dataset(const std::vector<std::vector<double>>& rows,
                        const std::vector<int>& labels) {
  Dataset d;
  for (std::size_t f = 0; f < rows[0].size(); ++f)
    d.feature_names.push_back("f" + std::to_string(f));
  for (std::size_t i = 0; i < rows.size(); ++i) d.records.push_back({rows[i], labels[i]});
  return d;
}

LogNNetModel zero_model(const Topology& t) {
  LogNNetModel m;
  m.topology = t;
  m.coeffs.min_s.assign(t.p, 0.0);
  m.coeffs.max_s.assign(t.p, 1.0);
  m.coeffs.mean10.assign(t.p, 0.0);
  m.w1 = Matrix(t.p + 1, t.m + 1);
  m.w2 = Matrix(t.m + 1, t.n + 1);
  return m;
}

// Plain re-statement of the two dense layers, written without reusing the
// library's loops.
std::vector<double> dense_oracle(const LogNNetModel& m, const std::vector<double>& sh) {
  const int M = m.topology.m, N = m.topology.n, P = m.topology.p;
  std::vector<double> sh2(M + 1);
  sh2[0] = 1.0;
  for (int j = 1; j <= M; ++j) {
    double acc = 0.0;
    for (int i = 0; i <= P; ++i) acc += sh[i] * m.w1.at(i, j);
    sh2[j] = 1.0 / (1.0 + std::exp(-acc));
  }
  std::vector<double> out(N + 1);
  for (int j = 0; j <= N; ++j) {
    double acc = 0.0;
    for (int i = 0; i <= M; ++i) acc += sh2[i] * m.w2.at(i, j);
    out[j] = 1.0 / (1.0 + std::exp(-acc));
  }
  return out;
}

}  // namespace

TEST_CASE("sigmoid fixed points and symmetry") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786300049).epsilon(1e-9));
  for (double x : {0.1, 0.7, 2.0, 15.0})
    CHECK(sigmoid(x) + sigmoid(-x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sigmoid(1000.0) == doctest::Approx(1.0));
  CHECK(sigmoid(-1000.0) == doctest::Approx(0.0));
}

TEST_CASE("all-zero weights emit 0.5 everywhere and class 0 on the tie") {
  const Topology t{4, 3, 3, 1};
  const auto m = zero_model(t);
  const auto out = forward(m, RbvRecord{{0.1, 0.2, 0.3, 0.4}, std::nullopt});
  REQUIRE(out.activations.size() == 2);
  CHECK(out.activations[0] == doctest::Approx(0.5));
  CHECK(out.activations[1] == doctest::Approx(0.5));
  CHECK(out.predicted_class == 0);  // strict > keeps the lowest index on ties
}

TEST_CASE("forward matches an independent restatement of the dense layers") {
  const Topology t{6, 5, 4, 1};
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = zero_model(t);
    for (int j = 1; j <= t.m; ++j)
      for (int i = 0; i <= t.p; ++i) m.w1.at(i, j) = u(rng);
    for (auto& w : m.w2.a) w = u(rng);
    for (auto& v : m.coeffs.mean10) v = u(rng) * 0.1;
    std::vector<double> x(t.s);
    for (auto& v : x) v = u(rng);
    const RbvRecord r{x, std::nullopt};
    const auto got = forward(m, r);
    const auto sh = reservoir_transform(input_slots(t, x), m.chaos, m.coeffs, t);
    const auto want = dense_oracle(m, sh);
    REQUIRE(got.activations.size() == want.size());
    for (std::size_t j = 0; j < want.size(); ++j)
      CHECK(got.activations[j] == doctest::Approx(want[j]).epsilon(1e-12));
    int want_class = 0;
    for (std::size_t j = 1; j < want.size(); ++j)
      if (want[j] > want[want_class]) want_class = static_cast<int>(j);
    CHECK(got.predicted_class == want_class);
  }
}

TEST_CASE("analytic gradients agree with central finite differences") {
  const Topology t{4, 3, 3, 1};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  auto m = zero_model(t);
  for (int j = 1; j <= t.m; ++j)
    for (int i = 0; i <= t.p; ++i) m.w1.at(i, j) = u(rng);
  for (auto& w : m.w2.a) w = u(rng);

  std::vector<std::vector<double>> sh_cache;
  std::vector<int> labels;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> sh(t.p + 1);
    sh[0] = 1.0;
    for (int j = 1; j <= t.p; ++j) sh[j] = u(rng);
    sh_cache.push_back(sh);
    labels.push_back(i % 2);
  }

  const auto g = lognnet_loss_gradients(m, sh_cache, labels);
  const double h = 1e-4;
  auto loss_at = [&](const LogNNetModel& mm) {
    return lognnet_loss_gradients(mm, sh_cache, labels).loss;
  };
  // every w2 entry, and every used w1 entry (column 0 is pinned to zero)
  for (std::size_t idx = 0; idx < m.w2.a.size(); ++idx) {
    auto up = m, dn = m;
    up.w2.a[idx] += h;
    dn.w2.a[idx] -= h;
    const double fd = (loss_at(up) - loss_at(dn)) / (2 * h);
    const double an = g.d_w2.a[idx];
    CHECK(std::abs(fd - an) <= 1e-3 * std::max(1.0, std::abs(fd)));
  }
  for (int i = 0; i <= t.p; ++i)
    for (int j = 0; j <= t.m; ++j) {
      if (j == 0) {
        CHECK(g.d_w1.at(i, 0) == 0.0);
        continue;
      }
      auto up = m, dn = m;
      up.w1.at(i, j) += h;
      dn.w1.at(i, j) -= h;
      const double fd = (loss_at(up) - loss_at(dn)) / (2 * h);
      const double an = g.d_w1.at(i, j);
      CHECK(std::abs(fd - an) <= 1e-3 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("training separates an offset line pattern") {
  SyntheticSpec spec;
  spec.n_features = 6;
  spec.pairs = {{0, 1, AttractorShape::Line, 10.0}};
  spec.noise = 0.3;
  const auto d = generate_synthetic(spec, 150, 11);
  const Topology t{6, 10, 8, 1};
  LogNNetTrainParams h;
  h.epochs = 60;
  const auto m = train_lognnet(d, t, {}, h);
  int correct = 0;
  for (const auto& r : d.records)
    if (forward(m, r).predicted_class == *r.label) ++correct;
  CHECK(static_cast<double>(correct) / d.records.size() >= 0.95);
}

TEST_CASE("training is reproducible to the last bit") {
  SyntheticSpec spec;
  spec.n_features = 4;
  spec.pairs = {{0, 1, AttractorShape::Cloud, 5.0}};
  spec.noise = 0.5;
  const auto d = generate_synthetic(spec, 60, 4);
  const Topology t{4, 6, 5, 1};
  LogNNetTrainParams h;
  h.seed = 21;
  const auto a = train_lognnet(d, t, {}, h);
  const auto b = train_lognnet(d, t, {}, h);
  CHECK(a.w1.a == b.w1.a);
  CHECK(a.w2.a == b.w2.a);
  CHECK(a.coeffs.mean10 == b.coeffs.mean10);
  h.seed = 22;
  const auto c = train_lognnet(d, t, {}, h);
  CHECK(a.w1.a != c.w1.a);
}

TEST_CASE("trained first hidden weight column stays zero") {
  const auto d = labeled_dataset({{0.0, 1.0}, {1.0, 0.0}, {0.2, 0.9}, {0.8, 0.1}},
                                 {1, 0, 1, 0});
  const Topology t{2, 3, 3, 1};
  const auto m = train_lognnet(d, t, {}, {});
  for (int i = 0; i <= t.p; ++i) CHECK(m.w1.at(i, 0) == 0.0);
}

TEST_CASE("cross_validate scores stub predictors exactly") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    rows.push_back({static_cast<double>(i)});
    labels.push_back(i % 2);
  }
  const auto d = labeled_dataset(rows, labels);
  const auto folds = stratified_folds(d, 5, 1);

  const Trainer always_one = [](const Dataset&, std::uint64_t) {
    return Predictor([](const RbvRecord&) { return 1; });
  };
  const auto half = cross_validate(d, folds, always_one, 0);
  CHECK(half.mean_accuracy == doctest::Approx(0.5));

  const Trainer oracle = [](const Dataset&, std::uint64_t) {
    return Predictor([](const RbvRecord& r) {
      return static_cast<int>(r.values[0]) % 2;
    });
  };
  const auto perfect = cross_validate(d, folds, oracle, 0);
  CHECK(perfect.mean_accuracy == 1.0);
  REQUIRE(perfect.fold_accuracies.size() == 5);
  for (double a : perfect.fold_accuracies) CHECK(a == 1.0);
}

TEST_CASE("reservoir_cache equals per-record transforms") {
  const Topology t{3, 4, 2, 1};
  auto m = zero_model(t);
  const auto d = labeled_dataset({{1, 2, 3}, {-1, 0, 1}}, {0, 1});
  const auto cache = reservoir_cache(m, d);
  REQUIRE(cache.size() == 2);
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    const auto direct =
        reservoir_transform(input_slots(t, d.records[i].values), m.chaos, m.coeffs, t);
    CHECK(cache[i] == direct);
  }
}
