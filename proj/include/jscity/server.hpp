#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace jscity {

class ServerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServeContent {
  std::string scene_bytes;  // served verbatim on /api/city
  std::string analysis_id;  // ETag value (quoted on the wire)
  std::string stats_json;
  // Viewer bundle directory; a placeholder page is served when absent.
  std::optional<std::filesystem::path> assets_dir;
};

/// Read-only HTTP server for one scene: /api/city, /api/stats, /healthz and
/// the viewer assets under /.
class CityServer {
 public:
  explicit CityServer(ServeContent content);
  ~CityServer();
  CityServer(const CityServer&) = delete;
  CityServer& operator=(const CityServer&) = delete;

  /// Binds to `port` (0 picks a free port) and returns the bound port.
  /// Throws ServerError when the port cannot be bound.
  int bind(const std::string& host, int port);
  /// Serves until stop(); requires a prior bind().
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// True when an If-None-Match header value matches the entity tag `etag`
/// (given without quotes).
bool etag_matches(const std::string& if_none_match, const std::string& etag);

}  // namespace jscity
