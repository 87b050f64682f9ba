#include "rbv/net/edge_router.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace rbv::net {
namespace {

class Socket {
 public:
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() {
    if (fd_ >= 0) ::close(fd_);
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  int get() const { return fd_; }

 private:
  int fd_;
};

int connect_with_timeout(const std::string& host, int port, int timeout_ms) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) return -1;
  const int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    return -1;
  }
  const int rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
  if (rc != 0) {
    if (errno != EINPROGRESS) {
      ::close(fd);
      return -1;
    }
    pollfd pfd{fd, POLLOUT, 0};
    if (::poll(&pfd, 1, timeout_ms) != 1) {
      ::close(fd);
      return -1;
    }
    int err = 0;
    socklen_t len = sizeof(err);
    if (::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) != 0 || err != 0) {
      ::close(fd);
      return -1;
    }
  }
  ::fcntl(fd, F_SETFL, flags);  // back to blocking; reads use poll
  return fd;
}

bool read_line_timeout(int fd, int timeout_ms, std::string& line) {
  line.clear();
  char c;
  for (;;) {
    pollfd pfd{fd, POLLIN, 0};
    if (::poll(&pfd, 1, timeout_ms) != 1) return false;
    const ssize_t n = ::recv(fd, &c, 1, 0);
    if (n <= 0) return false;
    if (c == '\n') return true;
    if (c != '\r') line += c;
  }
}

}  // namespace

std::optional<ServiceResponse> cloud_predict(const std::vector<double>& values,
                                             const RoutePolicy& policy) {
  const int fd = connect_with_timeout(policy.host, policy.port, policy.connect_timeout_ms);
  if (fd < 0) return std::nullopt;
  Socket sock(fd);
  const std::string req = format_request(values);
  std::size_t off = 0;
  while (off < req.size()) {
    const ssize_t n = ::send(fd, req.data() + off, req.size() - off, MSG_NOSIGNAL);
    if (n <= 0) return std::nullopt;
    off += static_cast<std::size_t>(n);
  }
  std::string line;
  if (!read_line_timeout(fd, policy.response_timeout_ms, line)) return std::nullopt;
  return parse_response(line);  // nullopt for ERR or garbage
}

ServiceResponse edge_predict(const QuantizedModel& q, const RbvRecord& r,
                             const RoutePolicy& policy) {
  for (int attempt = 0; attempt <= policy.retries; ++attempt) {
    if (auto resp = cloud_predict(r.values, policy)) return *resp;
  }
  const auto outcome = emulate_edge_inference(q, r.values);
  ServiceResponse resp;
  resp.diagnosis = outcome.predicted_class;
  resp.confidence = outcome.activations[static_cast<std::size_t>(outcome.predicted_class)];
  resp.model_tag = "edge-lognnet";
  return resp;
}

}  // namespace rbv::net
