#include "rbv/net/protocol.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace rbv::net {

std::string format_request(const std::vector<double>& values) {
  std::ostringstream os;
  os << "PREDICT v1 n=" << values.size() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    os << buf;
  }
  os << '\n';
  return os.str();
}

std::string format_response(const ServiceResponse& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", r.confidence);
  return "DIAG " + std::to_string(r.diagnosis) + " CONF " + buf + " MODEL " + r.model_tag +
         "\n";
}

std::string format_error(const ProtocolError& e) {
  return "ERR " + e.code + " " + e.detail + "\n";
}

std::optional<int> parse_request_header(const std::string& line, ProtocolError& err) {
  std::istringstream is(line);
  std::string verb, version, count_tok;
  is >> verb >> version >> count_tok;
  if (verb != "PREDICT") {
    err = {"PROTO", "unknown-verb"};
    return std::nullopt;
  }
  if (version != "v1") {
    err = {"PROTO", "unsupported-version"};
    return std::nullopt;
  }
  if (count_tok.rfind("n=", 0) != 0) {
    err = {"PROTO", "missing-count"};
    return std::nullopt;
  }
  const char* begin = count_tok.c_str() + 2;
  char* end = nullptr;
  const long n = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0' || n <= 0) {
    err = {"PROTO", "bad-count"};
    return std::nullopt;
  }
  return static_cast<int>(n);
}

bool parse_request_values(const std::string& line, int expected, std::vector<double>& out,
                          ProtocolError& err) {
  out.clear();
  std::istringstream is(line);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
      err = {"PROTO", "bad-value '" + cell + "'"};
      return false;
    }
    out.push_back(v);
  }
  if (static_cast<int>(out.size()) != expected) {
    err = {"ARITY",
           "expected=" + std::to_string(expected) + " got=" + std::to_string(out.size())};
    return false;
  }
  return true;
}

std::optional<ServiceResponse> parse_response(const std::string& line) {
  std::istringstream is(line);
  std::string diag_kw, conf_kw, model_kw;
  ServiceResponse r;
  if (!(is >> diag_kw >> r.diagnosis >> conf_kw >> r.confidence >> model_kw >> r.model_tag))
    return std::nullopt;
  if (diag_kw != "DIAG" || conf_kw != "CONF" || model_kw != "MODEL") return std::nullopt;
  if (r.diagnosis != 0 && r.diagnosis != 1) return std::nullopt;
  if (!(r.confidence >= 0.0 && r.confidence <= 1.0)) return std::nullopt;
  return r;
}

}  // namespace rbv::net
