#pragma once

#include <memory>
#include <optional>
#include <string>

#include "gvipath/store.hpp"

namespace gvipath {

struct HttpResponse {
  int status = 200;
  std::string content_type;
  std::string body;
};

/// Read-only query handlers over one loaded archive. Every method is const
/// and the archive is never mutated, so a single instance serves any number
/// of concurrent requests without locking.
class QueryService {
 public:
  /// A service with nothing loaded: /health reports "empty", the rest 503.
  QueryService() = default;
  explicit QueryService(std::shared_ptr<const ApspArchive> archive);

  bool loaded() const noexcept { return archive_ != nullptr; }

  HttpResponse health() const;
  HttpResponse nodes() const;
  HttpResponse route(const std::optional<std::string>& from,
                     const std::optional<std::string>& to) const;
  HttpResponse stats() const;
  HttpResponse network_geojson() const;

 private:
  std::shared_ptr<const ApspArchive> archive_;
  std::vector<EdgeGvi> edge_gvis_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  bool cors = false;
};

/// HTTP/1.1 front end for QueryService.
class HttpServer {
 public:
  HttpServer(std::shared_ptr<const QueryService> service, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the listening socket; returns the bound port (useful with port 0).
  int bind();
  /// Serves until stop(); call after bind().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gvipath
