#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "rfidac/engine.hpp"

namespace httplib {
class Server;
}

namespace rfidac {

/// HTTP front end over an Engine. Endpoints are listed in README.md; bodies
/// are JSON, errors come back as {"error": <code>, "message": <text>}.
class Service {
 public:
  /// Opens the store. Throws Error(ConfigInvalid) / Error(StoreCorrupt).
  explicit Service(const ServiceConfig& config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listen address (port 0 picks a free port) and starts serving
  /// plus, with the real clock, the scan driver. Returns the bound port.
  int start();
  /// Blocks until stop() is called from another thread.
  void wait();
  void stop();

  int port() const noexcept { return port_; }
  Engine& engine() noexcept { return *engine_; }

 private:
  void install_routes();

  std::unique_ptr<Engine> engine_;
  std::unique_ptr<httplib::Server> server_;
  std::thread server_thread_;
  std::thread driver_thread_;
  std::atomic<bool> running_{false};
  int port_ = -1;
};

/// Splits "host:port". Throws Error(ConfigInvalid).
std::pair<std::string, int> parse_listen_address(const std::string& listen);

}  // namespace rfidac
