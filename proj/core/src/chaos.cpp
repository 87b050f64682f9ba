#include "rbv/chaos.hpp"

#include <stdexcept>

namespace rbv {

std::vector<std::int64_t> generator_stream(const ChaosParams& p, std::size_t count) {
  if (p.l <= 0) throw std::invalid_argument("generator_stream: modulus must be positive");
  if (count == 0) throw std::invalid_argument("generator_stream: count must be >= 1");
  std::vector<std::int64_t> out;
  out.reserve(count);
  CongruentGenerator gen(p);
  out.push_back(gen.state());
  for (std::size_t i = 1; i < count; ++i) out.push_back(gen.next());
  return out;
}

}  // namespace rbv
