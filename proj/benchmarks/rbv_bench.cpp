// Microbenchmarks for the hot paths: reservoir generation, quantized edge
// inference, boosted-tree training/prediction and wire parsing.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rbv/analysis.hpp"
#include "rbv/hgb.hpp"
#include "rbv/lognnet.hpp"
#include "rbv/quantize.hpp"
#include "rbv/synthetic.hpp"
#include "rbv/wire.hpp"

using namespace rbv;

namespace {

std::vector<double> random_input(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

LogNNetModel bench_model() {
  const Topology t;  // 51:50:20:2
  LogNNetModel m;
  m.topology = t;
  m.coeffs.min_s.assign(t.p, -3.0);
  m.coeffs.max_s.assign(t.p, 3.0);
  m.coeffs.mean10.assign(t.p, 0.01);
  m.w1 = Matrix(t.p + 1, t.m + 1);
  m.w2 = Matrix(t.m + 1, t.n + 1);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int j = 1; j <= t.m; ++j)
    for (int i = 0; i <= t.p; ++i) m.w1.at(i, j) = u(rng);
  for (auto& w : m.w2.a) w = u(rng);
  return m;
}

Dataset bench_dataset(std::size_t n_per_class) {
  SyntheticSpec spec;
  spec.n_features = 10;
  spec.pairs = {{0, 1, AttractorShape::Cloud, 6.0}};
  spec.noise = 0.5;
  return generate_synthetic(spec, n_per_class, 7);
}

}  // namespace

static void BM_GeneratorStream(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(generator_stream({}, 2601));
  }
}
BENCHMARK(BM_GeneratorStream);

static void BM_ReservoirTransform(benchmark::State& state) {
  const auto m = bench_model();
  const auto x = random_input(m.topology.s, 2);
  const auto y = input_slots(m.topology, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reservoir_transform(y, m.chaos, m.coeffs, m.topology));
  }
}
BENCHMARK(BM_ReservoirTransform);

static void BM_FloatForward(benchmark::State& state) {
  const auto m = bench_model();
  const RbvRecord r{random_input(m.topology.s, 3), std::nullopt};
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(m, r));
  }
}
BENCHMARK(BM_FloatForward);

static void BM_EdgeInference(benchmark::State& state) {
  const auto q = quantize(bench_model(), 1000);
  const auto x = random_input(q.topology.s, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(emulate_edge_inference(q, x));
  }
}
BENCHMARK(BM_EdgeInference);

static void BM_HgbTrain(benchmark::State& state) {
  const auto d = bench_dataset(static_cast<std::size_t>(state.range(0)));
  HgbParams p;
  p.trees = 20;
  p.min_samples_leaf = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_hgb(d, p));
  }
}
BENCHMARK(BM_HgbTrain)->Arg(100)->Arg(500);

static void BM_HgbPredict(benchmark::State& state) {
  const auto d = bench_dataset(200);
  HgbParams p;
  p.trees = 50;
  p.min_samples_leaf = 5;
  const auto m = train_hgb(d, p);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_hgb(m, d.records[i++ % d.records.size()]));
  }
}
BENCHMARK(BM_HgbPredict);

static void BM_PearsonMatrix(benchmark::State& state) {
  const auto d = bench_dataset(250);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pearson_matrix(d));
  }
}
BENCHMARK(BM_PearsonMatrix);

static void BM_WireParse(benchmark::State& state) {
  std::string wire;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int f = 0; f < 100; ++f) {
    std::vector<double> values(51);
    for (auto& v : values) v = u(rng);
    wire += encode_frame(values);
  }
  for (auto _ : state) {
    FrameParser p;
    benchmark::DoNotOptimize(p.feed(wire));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * wire.size()));
}
BENCHMARK(BM_WireParse);

BENCHMARK_MAIN();
