#include "rbv/net/cloud_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>

#include "rbv/net/protocol.hpp"

namespace rbv::net {
namespace {

// Reads one LF-terminated line; false on EOF or error.
bool read_line(int fd, std::string& line) {
  line.clear();
  char c;
  for (;;) {
    const ssize_t n = ::recv(fd, &c, 1, 0);
    if (n <= 0) return false;
    if (c == '\n') return true;
    if (c != '\r') line += c;
  }
}

void send_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n <= 0) return;
    off += static_cast<std::size_t>(n);
  }
}

}  // namespace

CloudServer::CloudServer(HgbModel model, const std::string& bind_host, int port)
    : model_(std::move(model)), host_(bind_host), port_(port) {}

CloudServer::~CloudServer() { stop(); }

void CloudServer::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port_));
  if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1)
    throw std::runtime_error("bad bind address: " + host_);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("bind failed on " + host_ + ":" + std::to_string(port_));
  }
  if (port_ == 0) {
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
  }
  if (::listen(listen_fd_, 16) != 0) throw std::runtime_error("listen failed");
  running_ = true;
  accept_thread_ = std::thread(&CloudServer::accept_loop, this);
}

void CloudServer::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (accept_thread_.joinable()) accept_thread_.join();
  {
    std::lock_guard lock(clients_mutex_);
    for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  for (auto& w : workers_) w.join();
  workers_.clear();
  client_fds_.clear();
  listen_fd_ = -1;
}

void CloudServer::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) break;
    {
      std::lock_guard lock(clients_mutex_);
      client_fds_.push_back(fd);
    }
    workers_.emplace_back([this, fd]() { handle_connection(fd); });
  }
}

void CloudServer::handle_connection(int fd) {
  std::string line;
  while (running_ && read_line(fd, line)) {
    ProtocolError err;
    const auto expected = parse_request_header(line, err);
    if (!expected) {
      send_all(fd, format_error(err));
      continue;
    }
    if (!read_line(fd, line)) break;
    std::vector<double> values;
    if (!parse_request_values(line, *expected, values, err)) {
      send_all(fd, format_error(err));
      continue;
    }
    if (values.size() != model_.n_features) {
      send_all(fd, format_error({"ARITY", "expected=" + std::to_string(model_.n_features) +
                                              " got=" + std::to_string(values.size())}));
      continue;
    }
    const auto p = predict_hgb(model_, RbvRecord{values, std::nullopt});
    ServiceResponse resp;
    resp.diagnosis = p.predicted_class;
    // confidence of the winning class
    resp.confidence = p.predicted_class == 1 ? p.probability : 1.0 - p.probability;
    resp.model_tag = "cloud-hgb";
    send_all(fd, format_response(resp));
  }
  ::close(fd);
}

}  // namespace rbv::net
