#pragma once

#include <memory>
#include <string>

#include "cactus/api.hpp"

namespace cactus {

/// cpp-httplib front end for an Api instance.
class HttpServer {
 public:
  explicit HttpServer(Api& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to `port` (0 picks a free port) and returns the bound port.
  /// Throws BindError.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop() is called.
  void run();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cactus
