#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "chiron/service/session.hpp"

namespace chiron::service {

struct ServerOptions {
    std::string address = "127.0.0.1";
    unsigned short port = 0;  // 0 picks an ephemeral port
    int threads = 2;
    /// Per-subscriber backlog; a subscriber that falls this far behind is
    /// disconnected so it never stalls ingestion.
    std::size_t stream_backlog = 256;
    /// Stop on SIGINT/SIGTERM.
    bool handle_signals = false;
};

/// HTTP API plus the `WS /api/stream` update stream on one port.
class Server {
public:
    Server(Session& session, ServerOptions options);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds, starts the worker threads and returns the bound port.
    /// Throws Error(Io) when the address cannot be bound.
    unsigned short start();
    /// Idempotent.
    void stop();
    /// Blocks until the server stops.
    void wait();

    std::size_t subscriber_count() const;

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

}  // namespace chiron::service
