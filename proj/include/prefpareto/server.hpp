#pragma once

// HTTP + JSON front of the session manager.

#include <cstdint>
#include <memory>
#include <string>

#include "prefpareto/error.hpp"
#include "prefpareto/session.hpp"

namespace httplib {
class Server;
}

namespace prefpareto::session {

/// HTTP status for an error category: 400, 404 or 409.
int http_status(ErrorCode code) noexcept;

class HttpServer {
public:
    /// `default_seed` applies to session creation requests that carry no seed.
    explicit HttpServer(SessionManager& manager, std::uint64_t default_seed = 0);
    ~HttpServer();

    /// Binds to `port` (0 picks a free one) and returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop() is called.
    void serve();
    void stop();

private:
    SessionManager& manager_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace prefpareto::session
