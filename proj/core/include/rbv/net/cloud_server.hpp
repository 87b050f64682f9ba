#ifndef RBV_NET_CLOUD_SERVER_HPP
#define RBV_NET_CLOUD_SERVER_HPP

#include <atomic>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "rbv/hgb.hpp"

namespace rbv::net {

/// Line-protocol TCP service answering PREDICT requests with the HGB model.
/// Connections are handled concurrently, one thread each; a malformed request
/// gets an ERR line and the connection stays usable.
class CloudServer {
 public:
  CloudServer(HgbModel model, const std::string& bind_host, int port);
  ~CloudServer();

  CloudServer(const CloudServer&) = delete;
  CloudServer& operator=(const CloudServer&) = delete;

  /// Binds and starts accepting. Throws on bind failure.
  void start();
  void stop();

  int port() const { return port_; }

 private:
  void accept_loop();
  void handle_connection(int fd);

  HgbModel model_;
  std::string host_;
  int port_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::vector<std::thread> workers_;
  std::mutex clients_mutex_;
  std::vector<int> client_fds_;
};

}  // namespace rbv::net

#endif
