#include "prefpareto/server.hpp"

#include "httplib.h"
#include "prefpareto/error.hpp"
#include "prefpareto/serialization.hpp"

namespace prefpareto::session {

using nlohmann::json;

namespace {

json error_body(std::string_view code, const std::string& message) {
    return {{"error", {{"code", code}, {"message", message}}}};
}

void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json body_of(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    json j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail(ErrorCode::parameter, "request body must be a JSON object");
    return j;
}

template <typename T>
T field(const json& body, const char* name, T fallback) {
    if (!body.contains(name) || body.at(name).is_null()) return fallback;
    try {
        return body.at(name).get<T>();
    } catch (const json::exception&) {
        fail(ErrorCode::parameter, std::string("field '") + name + "' has the wrong type");
    }
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn, int ok_status = 200) {
    return [fn, ok_status](const httplib::Request& req, httplib::Response& res) {
        try {
            send(res, ok_status, fn(req));
        } catch (const Error& e) {
            send(res, http_status(e.code()), error_body(to_string(e.code()), e.what()));
        } catch (const json::exception& e) {
            send(res, 400, error_body("parameter", e.what()));
        } catch (const std::exception& e) {
            send(res, 500, error_body("internal", e.what()));
        }
    };
}

}  // namespace

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::not_found: return 404;
        case ErrorCode::conflict:
        case ErrorCode::precondition: return 409;
        case ErrorCode::io: return 500;
        default: return 400;
    }
}

HttpServer::HttpServer(SessionManager& manager, std::uint64_t default_seed)
    : manager_(manager), server_(std::make_unique<httplib::Server>()) {
    auto& m = manager_;
    server_->Post("/sessions", guarded([&m, default_seed](const httplib::Request& req) {
                      const json body = body_of(req);
                      CreateRequest cr;
                      cr.profile_id = field<std::int64_t>(body, "profile_id", cr.profile_id);
                      const auto n_fronts = field<std::int64_t>(body, "n_fronts", 40);
                      if (n_fronts < 0) fail(ErrorCode::parameter, "n_fronts must be at least 2");
                      cr.n_fronts = static_cast<std::size_t>(n_fronts);
                      if (body.contains("pair_limit") && !body.at("pair_limit").is_null()) {
                          const auto limit = field<std::int64_t>(body, "pair_limit", 0);
                          if (limit < 1) fail(ErrorCode::parameter, "pair_limit must be positive");
                          cr.pair_limit = static_cast<std::size_t>(limit);
                      }
                      cr.seed = field<std::uint64_t>(body, "seed", default_seed);
                      return m.create(cr);
                  }, 201));
    server_->Get(R"(/sessions/([^/]+))", guarded([&m](const httplib::Request& req) {
                     return m.get(req.matches[1]);
                 }));
    server_->Get(R"(/sessions/([^/]+)/pairs/next)", guarded([&m](const httplib::Request& req) {
                     return m.next_pair(req.matches[1]);
                 }));
    server_->Post(R"(/sessions/([^/]+)/preferences)", guarded([&m](const httplib::Request& req) {
                      const json body = body_of(req);
                      if (!body.contains("pair_id") || !body.contains("choice")) {
                          fail(ErrorCode::parameter, "pair_id and choice are required");
                      }
                      const auto pair_id = field<std::int64_t>(body, "pair_id", -1);
                      if (pair_id < 0) fail(ErrorCode::parameter, "pair_id must be non-negative");
                      const auto choice = parse_choice(field<std::string>(body, "choice", ""));
                      return m.submit_preference(req.matches[1], static_cast<std::size_t>(pair_id), choice);
                  }));
    server_->Post(R"(/sessions/([^/]+)/train)", guarded([&m](const httplib::Request& req) {
                      const json body = body_of(req);
                      std::optional<rank::TrainConfig> cfg;
                      if (body.contains("train_config") && !body.at("train_config").is_null()) {
                          cfg = body.at("train_config").get<rank::TrainConfig>();
                      }
                      return m.train(req.matches[1], cfg);
                  }));
    server_->Post(R"(/sessions/([^/]+)/optimize)", guarded([&m](const httplib::Request& req) {
                      const json body = body_of(req);
                      const auto budget = field<std::int64_t>(body, "budget", 30);
                      if (budget < 1 || budget > 10000) fail(ErrorCode::parameter, "budget must lie in [1, 10000]");
                      return m.start_optimize(req.matches[1], static_cast<int>(budget));
                  }, 202));
    server_->Get(R"(/sessions/([^/]+)/status)", guarded([&m](const httplib::Request& req) {
                     return m.status(req.matches[1]);
                 }));
    server_->Get(R"(/sessions/([^/]+)/result)", guarded([&m](const httplib::Request& req) {
                     return m.result(req.matches[1]);
                 }));
    server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.status == 404 && res.body.empty()) send(res, 404, error_body("not_found", "no such route"));
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = server_->bind_to_any_port(host);
        if (bound < 0) fail(ErrorCode::io, "cannot bind " + host);
        return bound;
    }
    if (!server_->bind_to_port(host, port)) fail(ErrorCode::io, "cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::serve() { server_->listen_after_bind(); }

void HttpServer::stop() {
    if (server_->is_running()) server_->stop();
}

}  // namespace prefpareto::session
