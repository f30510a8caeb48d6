#include "chiron/service/server.hpp"

#include <boost/asio/dispatch.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <deque>
#include <thread>
#include <vector>

#include "chiron/service/api.hpp"

namespace chiron::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

class StreamSession;

}  // namespace

struct Server::Impl {
    Impl(Session& s, ServerOptions o) : session(s), options(std::move(o)), ioc(std::max(1, options.threads)) {}

    void register_stream(const std::shared_ptr<StreamSession>& s);
    void unregister_stream(const StreamSession* s);
    void broadcast(const fusion::AssessmentReport& report);
    void do_accept();

    Session& session;
    ServerOptions options;
    net::io_context ioc;
    std::optional<tcp::acceptor> acceptor;
    std::optional<net::signal_set> signals;
    std::vector<std::thread> threads;
    std::optional<Session::ListenerId> listener;

    mutable std::mutex streams_mutex;
    std::vector<std::weak_ptr<StreamSession>> streams;

    std::mutex state_mutex;
    bool running = false;
};

namespace {

class StreamSession : public std::enable_shared_from_this<StreamSession> {
public:
    StreamSession(tcp::socket&& socket, Server::Impl& server) : ws_(std::move(socket)), server_(server) {}

    // Registration happens before the handshake response goes out, so a
    // client that has completed the handshake never misses an update.
    void run(http::request<http::string_body> req) {
        server_.register_stream(shared_from_this());
        net::dispatch(ws_.get_executor(), [self = shared_from_this(), req = std::move(req)]() mutable {
            self->ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
            self->ws_.async_accept(req, [self](beast::error_code ec) { self->on_accept(ec); });
        });
    }

    void send(std::shared_ptr<const std::string> message) {
        net::post(ws_.get_executor(), [self = shared_from_this(), message = std::move(message)]() mutable {
            self->on_send(std::move(message));
        });
    }

private:
    void on_accept(beast::error_code ec) {
        if (ec) return close();
        accepted_ = true;
        if (!queue_.empty()) do_write();
        do_read();
    }

    // Inbound frames are ignored; reading keeps control frames flowing and
    // notices the peer going away.
    void do_read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return self->close();
            self->buffer_.consume(self->buffer_.size());
            self->do_read();
        });
    }

    void on_send(std::shared_ptr<const std::string> message) {
        if (closed_) return;
        if (queue_.size() >= server_.options.stream_backlog) {
            closed_ = true;
            server_.unregister_stream(this);
            ws_.async_close(websocket::close_code::policy_error, [self = shared_from_this()](beast::error_code) {});
            return;
        }
        queue_.push_back(std::move(message));
        if (accepted_ && queue_.size() == 1) do_write();
    }

    void do_write() {
        ws_.text(true);
        ws_.async_write(net::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return self->close();
            self->queue_.pop_front();
            if (!self->queue_.empty() && !self->closed_) self->do_write();
        });
    }

    void close() {
        closed_ = true;
        server_.unregister_stream(this);
    }

    websocket::stream<beast::tcp_stream> ws_;
    Server::Impl& server_;
    beast::flat_buffer buffer_;
    std::deque<std::shared_ptr<const std::string>> queue_;
    bool accepted_ = false;
    bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, Server::Impl& server) : stream_(std::move(socket)), server_(server) {}

    void run() {
        net::dispatch(stream_.get_executor(), [self = shared_from_this()] { self->do_read(); });
    }

private:
    void do_read() {
        request_ = {};
        stream_.expires_after(std::chrono::seconds(60));
        http::async_read(stream_, buffer_, request_,
                         [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
    }

    void on_read(beast::error_code ec) {
        if (ec == http::error::end_of_stream) return do_close();
        if (ec) return;

        if (websocket::is_upgrade(request_)) {
            if (request_.target() == "/api/stream") {
                stream_.expires_never();
                std::make_shared<StreamSession>(stream_.release_socket(), server_)->run(std::move(request_));
                return;
            }
            return respond(HttpResponse{404, R"({"error":"NOT_FOUND","message":"no such stream"})"});
        }

        const auto method = std::string(request_.method_string());
        const auto target = std::string(request_.target());
        respond(handle_request(server_.session, method, target, request_.body()));
    }

    void respond(HttpResponse api) {
        auto res = std::make_shared<http::response<http::string_body>>(static_cast<http::status>(api.status),
                                                                       request_.version());
        res->set(http::field::server, "chiron");
        res->set(http::field::content_type, api.content_type);
        res->keep_alive(request_.keep_alive());
        res->body() = std::move(api.body);
        res->prepare_payload();
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
            if (ec) return;
            if (!res->keep_alive()) return self->do_close();
            self->do_read();
        });
    }

    void do_close() {
        beast::error_code ec;
        stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
    }

    beast::tcp_stream stream_;
    Server::Impl& server_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
};

}  // namespace

void Server::Impl::register_stream(const std::shared_ptr<StreamSession>& s) {
    std::lock_guard lock(streams_mutex);
    streams.push_back(s);
}

void Server::Impl::unregister_stream(const StreamSession* s) {
    std::lock_guard lock(streams_mutex);
    std::erase_if(streams, [s](const std::weak_ptr<StreamSession>& w) {
        auto p = w.lock();
        return !p || p.get() == s;
    });
}

void Server::Impl::broadcast(const fusion::AssessmentReport& report) {
    auto message = std::make_shared<const std::string>(fusion::report_to_json(report).dump());
    std::lock_guard lock(streams_mutex);
    for (const auto& w : streams) {
        if (auto s = w.lock()) s->send(message);
    }
}

void Server::Impl::do_accept() {
    acceptor->async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
        if (ec == net::error::operation_aborted) return;
        if (!ec) std::make_shared<HttpSession>(std::move(socket), *this)->run();
        do_accept();
    });
}

Server::Server(Session& session, ServerOptions options)
    : impl_(std::make_unique<Impl>(session, std::move(options))) {}

Server::~Server() { stop(); }

unsigned short Server::start() {
    std::lock_guard lock(impl_->state_mutex);
    if (impl_->running) return impl_->acceptor->local_endpoint().port();

    beast::error_code ec;
    const auto address = net::ip::make_address(impl_->options.address, ec);
    if (ec) throw Error(ErrorCode::Io, "bad listen address '" + impl_->options.address + "'");
    const tcp::endpoint endpoint(address, impl_->options.port);

    impl_->acceptor.emplace(impl_->ioc);
    impl_->acceptor->open(endpoint.protocol(), ec);
    if (!ec) impl_->acceptor->set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) impl_->acceptor->bind(endpoint, ec);
    if (!ec) impl_->acceptor->listen(net::socket_base::max_listen_connections, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot listen on " + impl_->options.address + ":" +
                                           std::to_string(impl_->options.port) + ": " + ec.message());

    impl_->listener = impl_->session.subscribe([impl = impl_.get()](const fusion::AssessmentReport& r) {
        impl->broadcast(r);
    });
    if (impl_->options.handle_signals) {
        impl_->signals.emplace(impl_->ioc, SIGINT, SIGTERM);
        impl_->signals->async_wait([impl = impl_.get()](beast::error_code, int) { impl->ioc.stop(); });
    }
    impl_->do_accept();
    impl_->running = true;
    for (int i = 0; i < std::max(1, impl_->options.threads); ++i) {
        impl_->threads.emplace_back([impl = impl_.get()] { impl->ioc.run(); });
    }
    return impl_->acceptor->local_endpoint().port();
}

void Server::stop() {
    std::lock_guard lock(impl_->state_mutex);
    if (!impl_->running) return;
    if (impl_->listener) impl_->session.unsubscribe(*impl_->listener);
    impl_->listener.reset();
    impl_->ioc.stop();
    for (auto& t : impl_->threads) {
        if (t.joinable()) t.join();
    }
    impl_->threads.clear();
    impl_->running = false;
}

void Server::wait() {
    std::vector<std::thread> threads;
    {
        std::lock_guard lock(impl_->state_mutex);
        threads.swap(impl_->threads);
    }
    for (auto& t : threads) {
        if (t.joinable()) t.join();
    }
    stop();
}

std::size_t Server::subscriber_count() const {
    std::lock_guard lock(impl_->streams_mutex);
    return impl_->streams.size();
}

}  // namespace chiron::service
