#ifndef RBV_NET_EDGE_ROUTER_HPP
#define RBV_NET_EDGE_ROUTER_HPP

#include <string>

#include "rbv/net/protocol.hpp"
#include "rbv/quantize.hpp"

namespace rbv::net {

struct RoutePolicy {
  std::string host = "127.0.0.1";
  int port = 9750;
  int connect_timeout_ms = 500;
  int response_timeout_ms = 1000;
  int retries = 1;
};

/// Tries the cloud first within the policy's timeouts and retries; any
/// connection failure, timeout, or protocol error falls back to the local
/// quantized model. The model tag always identifies the answering side.
ServiceResponse edge_predict(const QuantizedModel& q, const RbvRecord& r,
                             const RoutePolicy& policy);

/// One remote attempt; returns nullopt on any failure.
std::optional<ServiceResponse> cloud_predict(const std::vector<double>& values,
                                             const RoutePolicy& policy);

}  // namespace rbv::net

#endif
