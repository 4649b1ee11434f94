#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dhdiag/diag/dataset.hpp"

namespace dhdiag::api {

// Every non-2xx response body: {"status": <http>, "code": <code>, "message": <text>}.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

using Params = std::map<std::string, std::string, std::less<>>;

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ServiceConfig {
  std::filesystem::path web_dir;     // served at "/"
  std::filesystem::path schema_dir;  // served at "/docs/schemas/"
};

// Request router over an immutable dataset. handle() never throws; failures
// become error responses. Safe to call concurrently.
class Service {
 public:
  Service(std::shared_ptr<diag::Dataset> dataset, ServiceConfig config);

  Response handle(std::string_view path, const Params& params) const;

  const diag::Dataset& dataset() const noexcept { return *dataset_; }

 private:
  Response route(std::string_view path, const Params& params) const;
  Response file(const std::filesystem::path& dir, std::string_view name) const;

  std::shared_ptr<diag::Dataset> dataset_;
  ServiceConfig config_;
};

Response error_response(const ApiError& e);

// HTTP front end. Handles GET requests on a worker pool.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws std::runtime_error.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Blocks until the process is stopped. Throws std::runtime_error when the
// address cannot be bound.
void serve(const Service& service, const std::string& host, int port);

// "host:port" or ":port"; throws std::invalid_argument.
std::pair<std::string, int> parse_bind(std::string_view bind);

}  // namespace dhdiag::api
