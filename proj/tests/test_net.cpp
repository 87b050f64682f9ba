#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <thread>

#include "rbv/net/cloud_server.hpp"
#include "rbv/net/edge_router.hpp"
#include "rbv/net/protocol.hpp"
#include "rbv/quantize.hpp"
#include "rbv/synthetic.hpp"

using namespace rbv;
using namespace rbv::net;

namespace {

// Minimal blocking line client for poking the server with raw bytes.
class LineClient {
 public:
  explicit LineClient(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd_ >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  }
  ~LineClient() {
    if (fd_ >= 0) ::close(fd_);
  }
  void send_text(const std::string& s) {
    REQUIRE(::send(fd_, s.data(), s.size(), 0) == static_cast<ssize_t>(s.size()));
  }
  std::string read_line() {
    std::string line;
    char c;
    while (::recv(fd_, &c, 1, 0) == 1) {
      if (c == '\n') return line;
      line += c;
    }
    return line;
  }

 private:
  int fd_ = -1;
};

Dataset two_feature_data() {
  SyntheticSpec spec;
  spec.n_features = 2;
  spec.pairs = {{0, 1, AttractorShape::Cloud, 8.0}};
  spec.noise = 0.3;
  return generate_synthetic(spec, 80, 14);
}

HgbModel cloud_model() {
  HgbParams p;
  p.trees = 20;
  p.min_samples_leaf = 5;
  return train_hgb(two_feature_data(), p);
}

QuantizedModel edge_model() {
  const auto d = two_feature_data();
  const Topology t{2, 6, 4, 1};
  LogNNetTrainParams h;
  h.epochs = 40;
  return quantize(train_lognnet(d, t, {}, h), 1000);
}

}  // namespace

TEST_CASE("request and response lines round-trip through the parsers") {
  const std::vector<double> values{1.5, -2.25, 0.0001};
  const auto req = format_request(values);
  const auto nl = req.find('\n');
  ProtocolError err;
  const auto n = parse_request_header(req.substr(0, nl), err);
  REQUIRE(n.has_value());
  CHECK(*n == 3);
  std::vector<double> out;
  REQUIRE(parse_request_values(req.substr(nl + 1, req.size() - nl - 2), *n, out, err));
  CHECK(out == values);

  ServiceResponse r{1, 0.875, "cloud-hgb"};
  const auto line = format_response(r);
  CHECK(line == "DIAG 1 CONF 0.875000 MODEL cloud-hgb\n");
  const auto back = parse_response(line.substr(0, line.size() - 1));
  REQUIRE(back.has_value());
  CHECK(back->diagnosis == 1);
  CHECK(back->confidence == doctest::Approx(0.875));
  CHECK(back->model_tag == "cloud-hgb");
}

TEST_CASE("header parsing rejects bad verbs versions and counts") {
  ProtocolError err;
  CHECK_FALSE(parse_request_header("HELLO v1 n=3", err).has_value());
  CHECK(err.code == "PROTO");
  CHECK(err.detail == "unknown-verb");
  CHECK_FALSE(parse_request_header("PREDICT v2 n=3", err).has_value());
  CHECK(err.detail == "unsupported-version");
  CHECK_FALSE(parse_request_header("PREDICT v1", err).has_value());
  CHECK(err.detail == "missing-count");
  CHECK_FALSE(parse_request_header("PREDICT v1 n=zero", err).has_value());
  CHECK(err.detail == "bad-count");
  CHECK_FALSE(parse_request_header("PREDICT v1 n=-2", err).has_value());
}

TEST_CASE("value parsing reports arity mismatches") {
  ProtocolError err;
  std::vector<double> out;
  CHECK_FALSE(parse_request_values("1.0,2.0", 3, out, err));
  CHECK(err.code == "ARITY");
  CHECK(err.detail == "expected=3 got=2");
  CHECK_FALSE(parse_request_values("1.0,huh,3.0", 3, out, err));
  CHECK(err.code == "PROTO");
}

TEST_CASE("response parsing refuses malformed and out-of-range lines") {
  CHECK_FALSE(parse_response("ERR PROTO unknown-verb").has_value());
  CHECK_FALSE(parse_response("DIAG 2 CONF 0.5 MODEL x").has_value());
  CHECK_FALSE(parse_response("DIAG 1 CONF 1.5 MODEL x").has_value());
  CHECK_FALSE(parse_response("DIAG 1 CONF 0.5").has_value());
  CHECK_FALSE(parse_response("").has_value());
}

TEST_CASE("the cloud service answers a live prediction") {
  CloudServer server(cloud_model(), "127.0.0.1", 0);
  server.start();
  RoutePolicy policy;
  policy.port = server.port();
  const auto resp = cloud_predict({8.0, 8.0}, policy);
  REQUIRE(resp.has_value());
  CHECK(resp->model_tag == "cloud-hgb");
  CHECK(resp->diagnosis == 1);
  CHECK(resp->confidence >= 0.5);
  const auto neg = cloud_predict({0.0, 0.0}, policy);
  REQUIRE(neg.has_value());
  CHECK(neg->diagnosis == 0);
  server.stop();
}

TEST_CASE("a bad request earns an ERR line and the connection survives") {
  CloudServer server(cloud_model(), "127.0.0.1", 0);
  server.start();
  LineClient client(server.port());
  client.send_text("HELLO there\n");
  CHECK(client.read_line() == "ERR PROTO unknown-verb");
  client.send_text("PREDICT v1 n=3\n1,2,3\n");
  const auto arity = client.read_line();
  CHECK(arity.rfind("ERR ARITY expected=2", 0) == 0);
  client.send_text("PREDICT v1 n=2\n8.0,8.0\n");
  const auto ok = client.read_line();
  CHECK(ok.rfind("DIAG ", 0) == 0);
  CHECK(ok.find("MODEL cloud-hgb") != std::string::npos);
  server.stop();
}

TEST_CASE("concurrent connections are served independently") {
  CloudServer server(cloud_model(), "127.0.0.1", 0);
  server.start();
  RoutePolicy policy;
  policy.port = server.port();
  std::vector<std::thread> threads;
  std::vector<int> results(8, -1);
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&, i]() {
      const double v = (i % 2) ? 8.0 : 0.0;
      const auto r = cloud_predict({v, v}, policy);
      if (r) results[i] = r->diagnosis;
    });
  for (auto& t : threads) t.join();
  for (int i = 0; i < 8; ++i) CHECK(results[i] == i % 2);
  server.stop();
}

TEST_CASE("the edge router uses the cloud when it is reachable") {
  CloudServer server(cloud_model(), "127.0.0.1", 0);
  server.start();
  RoutePolicy policy;
  policy.port = server.port();
  const auto resp = edge_predict(edge_model(), RbvRecord{{8.0, 8.0}, std::nullopt}, policy);
  CHECK(resp.model_tag == "cloud-hgb");
  CHECK(resp.diagnosis == 1);
  server.stop();
}

TEST_CASE("the edge router falls back when nothing listens") {
  RoutePolicy policy;
  policy.port = 1;  // nothing listens on tcp/1
  policy.connect_timeout_ms = 200;
  policy.retries = 1;
  const auto q = edge_model();
  const auto resp = edge_predict(q, RbvRecord{{8.0, 8.0}, std::nullopt}, policy);
  CHECK(resp.model_tag == "edge-lognnet");
  const auto local = emulate_edge_inference(q, {8.0, 8.0});
  CHECK(resp.diagnosis == local.predicted_class);
  CHECK(resp.confidence ==
        doctest::Approx(local.activations[static_cast<std::size_t>(local.predicted_class)]));
}

TEST_CASE("the edge router falls back when the reply is garbage") {
  // a server that answers nonsense to every line
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(fd >= 0);
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = 0;
  ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
  REQUIRE(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  REQUIRE(::listen(fd, 4) == 0);
  std::thread garbler([fd]() {
    for (int i = 0; i < 4; ++i) {
      const int c = ::accept(fd, nullptr, nullptr);
      if (c < 0) return;
      const char* junk = "WAT 42\n";
      ::send(c, junk, std::strlen(junk), MSG_NOSIGNAL);
      ::close(c);
    }
  });
  RoutePolicy policy;
  policy.port = ntohs(addr.sin_port);
  policy.retries = 1;
  const auto resp = edge_predict(edge_model(), RbvRecord{{0.0, 0.0}, std::nullopt}, policy);
  CHECK(resp.model_tag == "edge-lognnet");
  ::shutdown(fd, SHUT_RDWR);
  ::close(fd);
  garbler.join();
}
