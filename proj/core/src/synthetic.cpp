#include "rbv/synthetic.hpp"

#include <random>
#include <stdexcept>

namespace rbv {

AttractorShape shape_from_string(const std::string& s) {
  if (s == "line") return AttractorShape::Line;
  if (s == "cross") return AttractorShape::Cross;
  if (s == "cloud") return AttractorShape::Cloud;
  if (s == "xor") return AttractorShape::Xor;
  throw std::invalid_argument("unknown attractor shape: " + s);
}

Dataset generate_synthetic(const SyntheticSpec& spec, std::size_t n_per_class,
                           std::uint64_t seed) {
  if (n_per_class == 0) throw std::invalid_argument("generate_synthetic: n_per_class = 0");
  if (spec.noise < 0.0) throw std::invalid_argument("generate_synthetic: negative noise");
  if (spec.n_features < 1) throw std::invalid_argument("generate_synthetic: n_features < 1");
  for (const auto& p : spec.pairs) {
    if (p.feature_a < 0 || p.feature_a >= spec.n_features || p.feature_b < 0 ||
        p.feature_b >= spec.n_features || p.feature_a == p.feature_b)
      throw std::invalid_argument("generate_synthetic: bad informative pair indices");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_real_distribution<double> magnitude(0.2, 3.0);
  std::uniform_int_distribution<int> coin(0, 1);

  Dataset d;
  d.schema_id = "synthetic";
  for (int f = 0; f < spec.n_features; ++f) d.feature_names.push_back("f" + std::to_string(f));

  const double sigma = spec.noise;
  auto noisy = [&](double v) { return sigma > 0.0 ? v + gauss(rng) * sigma : v; };

  for (int cls = 0; cls <= 1; ++cls) {
    for (std::size_t i = 0; i < n_per_class; ++i) {
      RbvRecord r;
      r.label = cls;
      r.values.resize(static_cast<std::size_t>(spec.n_features));
      for (auto& v : r.values) v = gauss(rng);  // nuisance baseline
      for (const auto& p : spec.pairs) {
        double x = 0.0, y = 0.0;
        switch (p.shape) {
          case AttractorShape::Line: {
            x = coord(rng);
            y = x + (cls == 1 ? p.class1_offset : 0.0);
            break;
          }
          case AttractorShape::Cross: {
            x = coord(rng);
            y = (coin(rng) ? x : -x) + (cls == 1 ? p.class1_offset : 0.0);
            break;
          }
          case AttractorShape::Cloud: {
            x = gauss(rng) + (cls == 1 ? p.class1_offset : 0.0);
            y = gauss(rng) + (cls == 1 ? p.class1_offset : 0.0);
            break;
          }
          case AttractorShape::Xor: {
            const double mx = magnitude(rng), my = magnitude(rng);
            const int sx = coin(rng) ? 1 : -1;
            // class 1: same-sign quadrants, class 0: opposite-sign quadrants
            const int sy = (cls == 1) ? sx : -sx;
            x = sx * mx;
            y = sy * my;
            break;
          }
        }
        r.values[static_cast<std::size_t>(p.feature_a)] = noisy(x);
        r.values[static_cast<std::size_t>(p.feature_b)] = noisy(y);
      }
      d.records.push_back(std::move(r));
    }
  }
  return d;
}

}  // namespace rbv
