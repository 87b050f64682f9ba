#ifndef RBV_SYNTHETIC_HPP
#define RBV_SYNTHETIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rbv/dataset.hpp"

namespace rbv {

enum class AttractorShape {
  Line,   // class 0 on y = x, class 1 on y = x + offset
  Cross,  // class 0 on y = +/-x, class 1 the same cross shifted by offset in y
  Cloud,  // class 0 gaussian cloud at origin, class 1 shifted by offset
  Xor     // class 1 where the product of the pair is positive, class 0 negative
};

AttractorShape shape_from_string(const std::string& s);

struct InformativePair {
  int feature_a = 0;
  int feature_b = 1;
  AttractorShape shape = AttractorShape::Line;
  double class1_offset = 10.0;
};

struct SyntheticSpec {
  int n_features = 2;
  std::vector<InformativePair> pairs;
  double noise = 0.0;  // gaussian sigma added to informative coordinates
};

/// Deterministic for fixed (spec, n_per_class, seed). Features not named in
/// any pair are label-independent standard-normal nuisance.
Dataset generate_synthetic(const SyntheticSpec& spec, std::size_t n_per_class,
                           std::uint64_t seed);

}  // namespace rbv

#endif
