#ifndef RBV_NET_PROTOCOL_HPP
#define RBV_NET_PROTOCOL_HPP

#include <optional>
#include <string>
#include <vector>

namespace rbv::net {

/// `PREDICT v1 n=<count>` followed by one line of comma-separated decimals.
struct ServiceRequest {
  int feature_count = 0;
  std::vector<double> values;
};

/// `DIAG <0|1> CONF <decimal> MODEL <tag>` on success.
struct ServiceResponse {
  int diagnosis = 0;
  double confidence = 0.0;
  std::string model_tag;  // "cloud-hgb" or "edge-lognnet"
};

struct ProtocolError {
  std::string code;    // e.g. PROTO, ARITY
  std::string detail;
};

std::string format_request(const std::vector<double>& values);
std::string format_response(const ServiceResponse& r);
std::string format_error(const ProtocolError& e);

/// Parses the `PREDICT v1 n=<count>` header line. Returns the expected value
/// count or an error.
std::optional<int> parse_request_header(const std::string& line, ProtocolError& err);
/// Parses the comma-separated value line against the announced count.
bool parse_request_values(const std::string& line, int expected, std::vector<double>& out,
                          ProtocolError& err);
/// Parses a `DIAG ...` response line; returns nullopt for anything else.
std::optional<ServiceResponse> parse_response(const std::string& line);

}  // namespace rbv::net

#endif
