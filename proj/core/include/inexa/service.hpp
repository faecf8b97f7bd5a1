#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "inexa/session.hpp"

namespace inexa::service {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceOptions {
  std::size_t threshold = session::kDefaultThreshold;  ///< used when a request gives none
  std::uint64_t seed = 0;
};

/// Transport-independent request handling for the session API:
///
///   POST /sessions?threshold=N[&seed=S][&mode=restore]   body: OCEL document
///   GET  /sessions/{sid}/model
///   GET  /sessions/{sid}/abstractions
///   GET  /sessions/{sid}/tree
///   POST /sessions/{sid}/apply    {"suffix", "target", "transitions"}
///   POST /sessions/{sid}/redo     {"oid"}
///   GET  /sessions/{sid}/export
///
/// Requests on one session are serialized; distinct sessions run in parallel.
class Router {
 public:
  explicit Router(ServiceOptions options = {}) : options_(options) {}

  Response handle(std::string_view method, std::string_view path, const std::map<std::string, std::string>& query,
                  std::string_view body);

  std::size_t session_count() const;

 private:
  struct Entry {
    std::mutex mutex;
    std::unique_ptr<session::Session> session;
    std::string created_at;
  };

  Response create(const std::map<std::string, std::string>& query, std::string_view body);
  std::shared_ptr<Entry> lookup(const std::string& sid) const;

  ServiceOptions options_;
  mutable std::mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_sid_ = 1;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;  ///< served under "/" when non-empty
};

/// HTTP/1.1 transport over a Router. Port 0 binds an ephemeral port.
class HttpServer {
 public:
  HttpServer(Router& router, ServerOptions options);
  ~HttpServer();

  /// Returns false when the static directory is missing or binding fails.
  bool bind();
  int port() const noexcept;
  /// Serves until stop() is called from another thread.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocking bind + run. Returns false when binding fails.
bool serve(Router& router, const ServerOptions& options);

}  // namespace inexa::service
