#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "rbv/model_io.hpp"
#include "rbv/quantize.hpp"
#include "rbv/rambudget.hpp"
#include "rbv/synthetic.hpp"

using namespace rbv;

namespace {

LogNNetModel small_model(const Topology& t, std::uint64_t seed) {
  LogNNetModel m;
  m.topology = t;
  m.coeffs.min_s.assign(t.p, -1.5);
  m.coeffs.max_s.assign(t.p, 1.5);
  m.coeffs.mean10.assign(t.p, 0.0);
  m.w1 = Matrix(t.p + 1, t.m + 1);
  m.w2 = Matrix(t.m + 1, t.n + 1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int j = 1; j <= t.m; ++j)
    for (int i = 0; i <= t.p; ++i) m.w1.at(i, j) = u(rng);
  for (auto& w : m.w2.a) w = u(rng);
  for (auto& v : m.coeffs.mean10) v = u(rng) * 0.2;
  return m;
}

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path("rbvtest_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("scalar quantization rounds half away from zero") {
  const Topology t{2, 1, 1, 1};
  auto m = small_model(t, 1);
  // Exactly representable binary fractions so the half cases are genuine.
  m.coeffs.min_s = {0.1240234375};  // * 1000 = 124.0234375 -> 124
  m.coeffs.max_s = {0.75};          // * 1000 = 750
  m.coeffs.mean10 = {0.05};         // * 10000 = 500
  m.w2.at(0, 0) = -0.25;
  m.w2.at(0, 1) = 0.75;
  const auto qa = quantize(m, 1000);
  CHECK(qa.q_min_s[0] == 124);
  CHECK(qa.q_max_s[0] == 750);
  CHECK(qa.q_mean10[0] == 500);  // mean coefficients carry a 10x scale
  // Scale 2 turns quarters into exact .5 halfway cases.
  const auto qb = quantize(m, 2);
  CHECK(qb.q_w2[0] == -1);  // -0.5 rounds away from zero
  CHECK(qb.q_w2[1] == 2);   // 1.5 rounds away from zero
}

TEST_CASE("quantization error is bounded by half a quantum") {
  const Topology t{5, 4, 3, 1};
  const auto m = small_model(t, 2);
  for (std::int32_t scale : {100, 1000, 10000}) {
    const auto q = quantize(m, scale);
    for (std::size_t i = 0; i < m.w1.a.size(); ++i)
      CHECK(std::abs(static_cast<double>(q.q_w1[i]) / scale - m.w1.a[i]) <= 0.5 / scale + 1e-15);
    for (std::size_t i = 0; i < m.w2.a.size(); ++i)
      CHECK(std::abs(static_cast<double>(q.q_w2[i]) / scale - m.w2.a[i]) <= 0.5 / scale + 1e-15);
    for (int j = 0; j < t.p; ++j)
      CHECK(std::abs(static_cast<double>(q.q_mean10[j]) / (scale * 10.0) - m.coeffs.mean10[j]) <=
            0.05 / scale + 1e-15);
  }
}

TEST_CASE("overflow errors name the tensor and the index") {
  const Topology t{2, 2, 2, 1};
  auto m = small_model(t, 3);
  m.w1.at(1, 2) = 40.0;  // 40000 exceeds the signed 16-bit range
  const std::size_t flat = 1 * (t.m + 1) + 2;
  try {
    quantize(m, 1000);
    FAIL("expected overflow");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("W1") != std::string::npos);
    CHECK(msg.find(std::to_string(flat)) != std::string::npos);
  }
  m.w1.at(1, 2) = 32.767;
  CHECK_NOTHROW(quantize(m, 1000));
  CHECK_THROWS(quantize(m, 0));
}

TEST_CASE("edge emulation with zero weights yields the 0.5 tie and class 0") {
  const Topology t{3, 2, 2, 1};
  auto m = small_model(t, 4);
  m.w1 = Matrix(t.p + 1, t.m + 1);
  m.w2 = Matrix(t.m + 1, t.n + 1);
  const auto q = quantize(m, 1000);
  const auto out = emulate_edge_inference(q, {0.1, 0.2, 0.3});
  CHECK(out.predicted_class == 0);
  for (double a : out.activations) CHECK(a == doctest::Approx(0.5));
}

TEST_CASE("edge emulation tracks the float-precision forward pass") {
  SyntheticSpec spec;
  spec.n_features = 8;
  spec.pairs = {{0, 1, AttractorShape::Line, 10.0}};
  spec.noise = 0.3;
  const auto d = generate_synthetic(spec, 80, 5);
  const Topology t{8, 10, 6, 1};
  LogNNetTrainParams h;
  h.epochs = 40;
  const auto m = train_lognnet(d, t, {}, h);
  const auto q = quantize(m, 1000);
  int agree = 0;
  for (const auto& r : d.records) {
    const auto full = forward(m, r);
    const auto edge = emulate_edge_inference(q, r.values);
    for (std::size_t j = 0; j < full.activations.size(); ++j)
      CHECK(std::abs(full.activations[j] - edge.activations[j]) < 0.05);
    if (full.predicted_class == edge.predicted_class) ++agree;
  }
  CHECK(agree >= static_cast<int>(d.records.size() * 95) / 100);
}

TEST_CASE("edge emulation is deterministic and checks arity") {
  const Topology t{3, 2, 2, 1};
  const auto q = quantize(small_model(t, 6), 1000);
  const auto a = emulate_edge_inference(q, {1.0, -1.0, 0.5});
  const auto b = emulate_edge_inference(q, {1.0, -1.0, 0.5});
  CHECK(a.activations == b.activations);
  CHECK_THROWS(emulate_edge_inference(q, {1.0, -1.0}));
}

TEST_CASE("memory budget reproduces the reference figures for 51:50:20:2") {
  const auto b = ram_budget(Topology{});
  CHECK(b.input_buffer == 208);
  CHECK(b.globals == 294);
  CHECK(b.serial == 310);
  CHECK(b.library_w1 == 2142);
  CHECK(b.library_w2 == 84);
  CHECK(b.library_coeffs == 300);
  CHECK(b.library == 2526);
  CHECK(b.stack_reserve == 1012);
  CHECK(b.total == 4350);
  const auto table = format_ram_budget(b);
  CHECK(table.find("4350") != std::string::npos);
  CHECK(table.find("2526") != std::string::npos);
}

TEST_CASE("memory budget closed form holds across random topologies") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> dim(1, 120);
  for (int trial = 0; trial < 100; ++trial) {
    const Topology t{dim(rng), dim(rng), dim(rng), dim(rng)};
    const auto b = ram_budget(t);
    const long S = t.s, P = t.p, M = t.m, N = t.n;
    CHECK(b.input_buffer == (S + 1) * 4);
    CHECK(b.globals == (P + 1) * 4 + (M + 1) * 4 + 6);
    CHECK(b.library_w1 == (P + 1) * (M + 1) * 2);
    CHECK(b.library_w2 == (M + 1) * (N + 1) * 2);
    CHECK(b.library_coeffs == 3 * P * 2);
    CHECK(b.library == b.library_w1 + b.library_w2 + b.library_coeffs);
    CHECK(b.total == b.input_buffer + b.globals + b.serial + b.library + b.stack_reserve);
  }
}

TEST_CASE("quantized model files round-trip byte for byte") {
  const Topology t{5, 4, 3, 1};
  const auto q = quantize(small_model(t, 9), 1000);
  TempPath f1("q1.model"), f2("q2.model");
  export_lognnet(q, f1.path);
  const auto back = import_lognnet(f1.path);
  CHECK(back.q_w1 == q.q_w1);
  CHECK(back.q_w2 == q.q_w2);
  CHECK(back.q_mean10 == q.q_mean10);
  CHECK(back.scale_factor == q.scale_factor);
  CHECK(back.chaos.l == q.chaos.l);
  export_lognnet(back, f2.path);
  CHECK(slurp(f1.path) == slurp(f2.path));
  CHECK(sniff_model_magic(f1.path) == "LOGNNET1");
}

TEST_CASE("float model files round-trip byte for byte") {
  const auto m = small_model(Topology{4, 3, 2, 1}, 10);
  TempPath f1("f1.model"), f2("f2.model");
  export_lognnet_float(m, f1.path);
  const auto back = import_lognnet_float(f1.path);
  CHECK(back.w1.a == m.w1.a);
  CHECK(back.w2.a == m.w2.a);
  CHECK(back.coeffs.mean10 == m.coeffs.mean10);
  export_lognnet_float(back, f2.path);
  CHECK(slurp(f1.path) == slurp(f2.path));
  CHECK(sniff_model_magic(f1.path) == "LOGNNETF1");
}

TEST_CASE("corrupted quantized files fail with located errors") {
  const Topology t{3, 2, 2, 1};
  const auto q = quantize(small_model(t, 11), 1000);
  TempPath f("corrupt.model");
  export_lognnet(q, f.path);
  const std::string good = slurp(f.path);

  SUBCASE("wrong magic") {
    spit(f.path, "LOGNNET2" + good.substr(8));
    CHECK_THROWS_WITH_AS(import_lognnet(f.path), doctest::Contains("LOGNNET2"),
                         ModelParseError);
  }
  SUBCASE("truncated weight section") {
    const auto cut = good.rfind('\n', good.size() - 2);
    spit(f.path, good.substr(0, cut + 1));
    CHECK_THROWS_AS(import_lognnet(f.path), ModelParseError);
  }
  SUBCASE("value outside 16 bits") {
    // replace the first number of the first W1 row with 40000
    auto bad = good;
    const auto w1pos = bad.find("W1 ");
    REQUIRE(w1pos != std::string::npos);
    const auto row_start = bad.find('\n', w1pos) + 1;
    const auto row_end = bad.find('\n', row_start);
    std::string row = bad.substr(row_start, row_end - row_start);
    const auto sp = row.find(' ');
    row = "40000" + (sp == std::string::npos ? "" : row.substr(sp));
    bad = bad.substr(0, row_start) + row + bad.substr(row_end);
    spit(f.path, bad);
    CHECK_THROWS_WITH_AS(import_lognnet(f.path), doctest::Contains("40000"),
                         ModelParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(import_lognnet("rbvtest_does_not_exist.model"), ModelParseError);
  }
}
