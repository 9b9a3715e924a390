#include "banglapredict/service.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "banglapredict/error.hpp"

namespace banglapredict {

namespace {

using nlohmann::json;

HttpResult error(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

// Scores go on the wire with at most 12 significant digits.
double wire_score(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace

PredictionService::PredictionService(Model model) : model_(std::move(model)) {}

HttpResult PredictionService::health() const {
  return {200, json{{"status", "ok"}, {"model_id", model_.manifest.model_id}}.dump()};
}

HttpResult PredictionService::models() const {
  json methods = json::array();
  for (Method m : kAllMethods) methods.push_back(method_name(m));
  const Lambdas defaults;
  json body{
      {"model_id", model_.manifest.model_id},
      {"methods", methods},
      {"max_order", model_.table.max_order()},
      {"total_tokens", model_.table.total_tokens()},
      {"word_forms", model_.table.vocabulary_size()},
      {"sentences", model_.manifest.sentences},
      {"corpus_fingerprint", model_.manifest.corpus_fingerprint},
      {"max_k", kMaxSuggestions},
      {"default_lambdas", json::array({defaults.trigram, defaults.bigram, defaults.unigram})},
  };
  return {200, body.dump()};
}

HttpResult PredictionService::predict(std::string_view body) const {
  const auto start = std::chrono::steady_clock::now();
  json request = json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object()) {
    return error(400, "request body must be a JSON object");
  }

  const auto context_it = request.find("context");
  if (context_it == request.end() || !context_it->is_string()) {
    return error(400, "field 'context' must be a string");
  }
  PredictorConfig config;
  if (const auto it = request.find("method"); it != request.end()) {
    if (!it->is_string()) return error(400, "field 'method' must be a string");
    const auto m = parse_method(it->get<std::string>());
    if (!m) return error(400, "field 'method': unknown method '" + it->get<std::string>() + "'");
    config.method = *m;
  }
  if (const auto it = request.find("k"); it != request.end()) {
    if (!it->is_number_integer()) return error(400, "field 'k' must be an integer");
    const auto k = it->get<long long>();
    if (k < 1 || k > kMaxSuggestions) {
      return error(400, "field 'k' must be between 1 and " + std::to_string(kMaxSuggestions));
    }
    config.k = static_cast<int>(k);
  }

  Sentence fragment;
  try {
    fragment = tokenize_fragment(context_it->get<std::string>());
  } catch (const IngestionError& e) {
    return error(400, std::string("field 'context': ") + e.what());
  }

  std::vector<Suggestion> suggestions;
  try {
    suggestions = banglapredict::predict(model_.table, config, fragment);
  } catch (const std::exception& e) {
    return error(422, e.what());
  }

  json list = json::array();
  for (const auto& s : suggestions) {
    list.push_back({{"word", s.word}, {"score", wire_score(s.score)}, {"order_used", s.order_used}});
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return {200, json{{"suggestions", list},
                    {"model_id", model_.manifest.model_id},
                    {"elapsed_micros", elapsed}}
                   .dump()};
}

struct HttpServer::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
};

HttpServer::HttpServer(const PredictionService& service, const ServerOptions& options)
    : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  const std::string origin = options.allow_origin;
  auto reply = [origin](httplib::Response& res, const HttpResult& r) {
    if (!origin.empty()) res.set_header("Access-Control-Allow-Origin", origin);
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  };
  srv.Get("/api/v1/health",
          [&service, reply](const httplib::Request&, httplib::Response& res) {
            reply(res, service.health());
          });
  srv.Get("/api/v1/models",
          [&service, reply](const httplib::Request&, httplib::Response& res) {
            reply(res, service.models());
          });
  srv.Post("/api/v1/predict",
           [&service, reply](const httplib::Request& req, httplib::Response& res) {
             reply(res, service.predict(req.body));
           });
  srv.Options(R"(/api/v1/.*)", [origin](const httplib::Request&, httplib::Response& res) {
    if (!origin.empty()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    }
    res.status = 204;
  });

  // SO_REUSEADDR only: the library default also sets SO_REUSEPORT, which
  // would let a second server silently share an occupied port.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  srv.set_tcp_nodelay(true);

  if (options.port == 0) {
    impl_->port = srv.bind_to_any_port(options.host);
  } else if (srv.bind_to_port(options.host, options.port)) {
    impl_->port = options.port;
  } else {
    impl_->port = -1;
  }
  if (impl_->port <= 0) {
    throw std::runtime_error("cannot bind " + options.host + ":" + std::to_string(options.port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
}

HttpServer::~HttpServer() {
  stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpServer::port() const noexcept { return impl_->port; }

void HttpServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace banglapredict
