#include <httplib.h>
#include <spdlog/spdlog.h>

#include <charconv>

#include "dhdiag/api/service.hpp"

namespace dhdiag::api {

std::pair<std::string, int> parse_bind(std::string_view bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("bind address must be host:port");
  std::string host(bind.substr(0, colon));
  if (host.empty()) host = "127.0.0.1";
  const auto port_text = bind.substr(colon + 1);
  int port = 0;
  const auto r = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (r.ec != std::errc{} || r.ptr != port_text.data() + port_text.size() || port < 0 || port > 65535)
    throw std::invalid_argument("bad port in bind address '" + std::string(bind) + "'");
  return {host, port};
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>()) {
  impl_->server.Get(".*", [&service](const httplib::Request& req, httplib::Response& res) {
    Params params;
    for (const auto& [k, v] : req.params) params.insert_or_assign(k, v);
    auto out = service.handle(req.path, params);
    res.status = out.status;
    res.set_content(std::move(out.body), out.content_type);
  });
  impl_->server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port))
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void serve(const Service& service, const std::string& host, int port) {
  HttpServer server(service);
  const int bound = server.bind(host, port);
  spdlog::info("serving on http://{}:{}/", host, bound);
  server.listen();
}

}  // namespace dhdiag::api
