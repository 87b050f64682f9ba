#ifndef RBV_WIRE_HPP
#define RBV_WIRE_HPP

#include <string>
#include <string_view>
#include <vector>

namespace rbv {

/// One decoded frame. `malformed` is set when any token failed to parse as a
/// clean number (such tokens decode to 0.0, matching the target's toFloat).
struct WireFrame {
  std::vector<double> payload;
  bool malformed = false;
};

/// Plain decimal with up to 7 significant digits, no exponent notation.
std::string format_wire_value(double v);

/// `v1 T v2 T ... vn T FN T` with no separators beyond the `T`s.
std::string encode_frame(const std::vector<double>& values);

/// Incremental splitter over arbitrary byte chunks. Tokens are terminated by
/// `T`; the token `FN` completes a frame. Partial tokens survive across
/// chunk boundaries.
class FrameParser {
 public:
  std::vector<WireFrame> feed(std::string_view bytes);

 private:
  void finish_token();

  std::string token_;
  WireFrame current_;
  std::vector<WireFrame> completed_;
};

}  // namespace rbv

#endif
