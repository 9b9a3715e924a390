#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "banglapredict/model_store.hpp"
#include "banglapredict/models.hpp"

namespace banglapredict {

inline constexpr int kMaxSuggestions = 50;

struct HttpResult {
  int status = 200;
  std::string body;  // JSON
};

/// Request handling over one immutable model. Every method is const and
/// safe to call from concurrent request threads.
class PredictionService {
 public:
  explicit PredictionService(Model model);

  HttpResult health() const;
  HttpResult models() const;
  /// Body: {"context": string, "method": string, "k": integer}.
  HttpResult predict(std::string_view body) const;

  const Model& model() const noexcept { return model_; }

 private:
  Model model_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string allow_origin;  // empty disables CORS headers
};

/// HTTP/1.1 front end for a PredictionService. Listens from construction
/// until stop() or destruction.
class HttpServer {
 public:
  /// Throws std::runtime_error when the port cannot be bound.
  HttpServer(const PredictionService& service, const ServerOptions& options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  int port() const noexcept;
  /// Blocks until the server stops.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace banglapredict
