#include "rbv/wire.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace rbv {

std::string format_wire_value(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("encode_frame: non-finite value");
  if (v == 0.0) return "0";
  char buf[64];
  // decimals chosen so exactly 7 significant digits survive, printed plain;
  // that keeps the relative round-trip error under 5e-7 for any magnitude
  const int exp10 = static_cast<int>(std::floor(std::log10(std::fabs(v))));
  int decimals = 6 - exp10;
  if (decimals < 0) {
    // round to 7 significant digits, then print as an integer
    const double scale = std::pow(10.0, decimals);
    const double rounded = std::round(v * scale) / scale;
    std::snprintf(buf, sizeof(buf), "%.0f", rounded);
    return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s = buf;
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string encode_frame(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    out += format_wire_value(v);
    out += 'T';
  }
  out += "FNT";
  return out;
}

void FrameParser::finish_token() {
  if (token_ == "FN") {
    completed_.push_back(std::move(current_));
    current_ = WireFrame{};
  } else {
    const char* begin = token_.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || !std::isfinite(v)) {
      current_.payload.push_back(0.0);
      current_.malformed = true;
    } else {
      current_.payload.push_back(v);
      if (*end != '\0') current_.malformed = true;  // trailing garbage after the number
    }
  }
  token_.clear();
}

std::vector<WireFrame> FrameParser::feed(std::string_view bytes) {
  for (char c : bytes) {
    if (c == 'T')
      finish_token();
    else
      token_ += c;
  }
  return std::exchange(completed_, {});
}

}  // namespace rbv
