#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "cactus/error.hpp"

namespace cactus {

/// Transport-independent HTTP request/response pair. The server adapter maps
/// cpp-httplib onto these; tests drive the API without sockets.
struct ApiRequest {
  std::string method;
  std::string path;
  std::string body;
  std::map<std::string, std::string> query;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ApiError {
  int status = 500;
  std::string code;
  std::string message;
  std::string context;
};

/// Each engine error code maps to exactly one HTTP status.
int http_status(ErrorCode code) noexcept;
ApiError to_api_error(const Error& error);

struct ServiceOptions {
  /// Datasets named in session requests are resolved under this directory;
  /// conflict exports are written to `<data_dir>/exports`.
  std::filesystem::path data_dir = ".";
  /// Cap on sampled configs per training request.
  std::size_t max_samples = 200;
  std::size_t threads = 0;
};

/// JSON API over in-memory sessions. Requests for different sessions run
/// concurrently; mutations of one session are serialized, reads share a lock.
class Api {
 public:
  explicit Api(ServiceOptions options);
  ~Api();
  Api(const Api&) = delete;
  Api& operator=(const Api&) = delete;

  ApiResponse handle(const ApiRequest& request);

 private:
  struct SessionState;

  std::shared_ptr<SessionState> session(const std::string& id);
  ApiResponse dispatch(const ApiRequest& request);
  ApiResponse create_session(const ApiRequest& request);

  ServiceOptions options_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<SessionState>> sessions_;
  std::size_t next_session_ = 1;
};

}  // namespace cactus
