#include "jscity/server.hpp"

#include <httplib.h>

#include <string_view>

namespace jscity {

namespace {

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>jscity</title></head>
<body>
<h1>jscity</h1>
<p>The viewer bundle is not installed. The scene is available at
<a href="/api/city">/api/city</a> and the statistics at <a href="/api/stats">/api/stats</a>.</p>
</body></html>
)";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

bool etag_matches(const std::string& if_none_match, const std::string& etag) {
  std::string_view rest = if_none_match;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view tag = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (tag == "*") return true;
    if (tag.starts_with("W/")) tag.remove_prefix(2);
    if (tag.size() >= 2 && tag.front() == '"' && tag.back() == '"') tag = tag.substr(1, tag.size() - 2);
    if (tag == etag) return true;
  }
  return false;
}

struct CityServer::Impl {
  ServeContent content;
  httplib::Server http;
};

CityServer::CityServer(ServeContent content) : impl_(std::make_unique<Impl>()) {
  impl_->content = std::move(content);
  Impl& s = *impl_;
  const std::string etag = "\"" + s.content.analysis_id + "\"";

  s.http.Get("/api/city", [&s, etag](const httplib::Request& req, httplib::Response& res) {
    res.set_header("ETag", etag);
    res.set_header("Cache-Control", "no-cache");
    if (req.has_header("If-None-Match") &&
        etag_matches(req.get_header_value("If-None-Match"), s.content.analysis_id)) {
      res.status = 304;
      return;
    }
    res.set_content(s.content.scene_bytes, "application/json");
  });
  s.http.Get("/api/stats", [&s](const httplib::Request&, httplib::Response& res) {
    res.set_content(s.content.stats_json, "application/json");
  });
  s.http.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  bool mounted = false;
  if (s.content.assets_dir && std::filesystem::is_regular_file(*s.content.assets_dir / "index.html")) {
    mounted = s.http.set_mount_point("/", s.content.assets_dir->string());
  }
  if (!mounted) {
    s.http.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
  // Read-only: anything but GET/HEAD is refused.
  auto refuse = [](const httplib::Request&, httplib::Response& res) { res.status = 405; };
  s.http.Post(".*", refuse);
  s.http.Put(".*", refuse);
  s.http.Delete(".*", refuse);
  s.http.Patch(".*", refuse);
}

CityServer::~CityServer() { stop(); }

int CityServer::bind(const std::string& host, int port) {
  // httplib defaults to SO_REUSEPORT, which lets a second server share a busy port.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  if (port == 0) {
    const int bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) throw ServerError("cannot bind to " + host);
    return bound;
  }
  if (!impl_->http.bind_to_port(host, port)) {
    throw ServerError("cannot bind to " + host + ":" + std::to_string(port) + " (port in use?)");
  }
  return port;
}

void CityServer::run() { impl_->http.listen_after_bind(); }

void CityServer::stop() {
  if (impl_) impl_->http.stop();
}

void CityServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace jscity
