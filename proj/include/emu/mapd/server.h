#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "emu/mapd/backend.h"

namespace emu::mapd {

struct ServerOptions {
  std::string address = "0.0.0.0";
  /// 0 picks a free port.
  uint16_t port = 8080;
  int threads = 2;
  /// Serves /map.html and other assets when set.
  std::filesystem::path staticDir;
  /// Per-client event queue bound.
  size_t queueCapacity = 1024;
};

/// HTTP + WebSocket front end of a Backend.
class Server {
 public:
  Server(Backend& backend, ServerOptions options);
  ~Server();

  /// Binds and starts serving on background threads.
  void start();
  /// Closes the listener and all sessions and joins the threads.
  void stop();
  /// Blocks until stop() is called from another thread.
  void wait();

  uint16_t port() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace emu::mapd
