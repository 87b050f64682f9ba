#ifndef RBV_CHAOS_HPP
#define RBV_CHAOS_HPP

#include <cstdint>
#include <vector>

namespace rbv {

/// x_{n+1} = (D - K * x_n) % L with C-style truncated remainder, x_1 = C.
struct ChaosParams {
  std::int64_t k = 93;
  std::int64_t d = 68;
  std::int64_t l = 9276;
  std::int64_t c = 73;
};

class CongruentGenerator {
 public:
  explicit CongruentGenerator(const ChaosParams& p) : p_(p), state_(p.c) {}

  /// Advances the recurrence and returns the new state. The truncated
  /// remainder takes the sign of the dividend, matching the target's `%`.
  std::int64_t next() {
    state_ = (p_.d - p_.k * state_) % p_.l;
    return state_;
  }

  std::int64_t state() const { return state_; }

  /// Normalized weight in (-1, 1) from the next state.
  double next_weight() { return static_cast<double>(next()) / static_cast<double>(p_.l); }

 private:
  ChaosParams p_;
  std::int64_t state_;
};

/// First `count` values of the sequence, starting with x_1 = C.
std::vector<std::int64_t> generator_stream(const ChaosParams& p, std::size_t count);

}  // namespace rbv

#endif
