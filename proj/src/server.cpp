/* Copyright 2026 The rfglove Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "rfglove/server.hpp"

#include <poll.h>
#include <sys/socket.h>

#include <charconv>
#include <cstdlib>
#include <list>
#include <mutex>
#include <string_view>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace rfglove {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

constexpr Millis kStreamPoll{200};

struct Connection {
    int fd = -1;
    bool done = false;
    std::thread thread;
};

// True once the peer has hung up or sent something we should read.
bool peer_readable(int fd) {
    pollfd p{fd, POLLIN | POLLRDHUP, 0};
    return ::poll(&p, 1, 0) > 0 && (p.revents & (POLLIN | POLLRDHUP | POLLHUP | POLLERR)) != 0;
}

}  // namespace

std::uint16_t default_port(std::uint16_t fallback) {
    const char* env = std::getenv("RFGLOVE_PORT");
    if (env == nullptr) return fallback;
    const std::string_view s(env);
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v == 0 || v > 65535) return fallback;
    return static_cast<std::uint16_t>(v);
}

struct Server::Impl {
    Impl(SessionManager& s, const std::string& address, std::uint16_t port)
        : sessions(s), acceptor(ioc) {
        beast::error_code ec;
        const auto addr = net::ip::make_address(address, ec);
        if (ec) throw std::runtime_error("bad listen address '" + address + "': " + ec.message());
        const tcp::endpoint ep(addr, port);
        acceptor.open(ep.protocol());
        acceptor.set_option(net::socket_base::reuse_address(true));
        acceptor.bind(ep, ec);
        if (ec) throw std::runtime_error("cannot bind " + address + ":" + std::to_string(port) + ": " + ec.message());
        acceptor.listen(net::socket_base::max_listen_connections);
        bound_port = acceptor.local_endpoint().port();
    }

    void accept_loop() {
        while (!stopping) {
            tcp::socket sock(ioc);
            beast::error_code ec;
            acceptor.accept(sock, ec);
            if (stopping) break;
            if (ec) continue;
            reap();
            std::lock_guard lock(mu);
            auto& conn = conns.emplace_back();
            conn.fd = sock.native_handle();
            conn.thread = std::thread([this, &conn, s = std::move(sock)]() mutable { serve(conn, std::move(s)); });
        }
    }

    void reap() {
        std::list<Connection> finished;
        {
            std::lock_guard lock(mu);
            for (auto it = conns.begin(); it != conns.end();) {
                auto next = std::next(it);
                if (it->done) finished.splice(finished.end(), conns, it);
                it = next;
            }
        }
        for (auto& c : finished) c.thread.join();
    }

    void serve(Connection& conn, tcp::socket sock) {
        try {
            session_loop(sock);
        } catch (const std::exception&) {
            // Connection-level failures only end this connection.
        }
        std::lock_guard lock(mu);
        conn.done = true;
        beast::error_code ec;
        sock.close(ec);
    }

    void session_loop(tcp::socket& sock) {
        beast::flat_buffer buf;
        for (;;) {
            http::request<http::string_body> req;
            beast::error_code ec;
            http::read(sock, buf, req, ec);
            if (ec) return;
            if (websocket::is_upgrade(req)) {
                stream(sock, std::move(req));
                return;
            }
            auto res = respond(req);
            http::write(sock, res, ec);
            if (ec || !res.keep_alive()) break;
        }
        beast::error_code ec;
        sock.shutdown(tcp::socket::shutdown_send, ec);
    }

    http::response<http::string_body> reply(const http::request<http::string_body>& req, int status,
                                            const std::string& body) {
        http::response<http::string_body> res{static_cast<http::status>(status), req.version()};
        res.set(http::field::server, "rfglove");
        res.set(http::field::content_type, "application/json");
        res.set(http::field::access_control_allow_origin, "*");
        res.keep_alive(req.keep_alive());
        res.body() = body;
        res.prepare_payload();
        return res;
    }

    http::response<http::string_body> respond(const http::request<http::string_body>& req) {
        if (req.method() == http::verb::options) {
            auto res = reply(req, 204, "");
            res.set(http::field::access_control_allow_methods, "GET, POST, DELETE, OPTIONS");
            res.set(http::field::access_control_allow_headers, "Content-Type");
            return res;
        }
        HttpReply r;
        try {
            r = handle_request(sessions, std::string_view(req.method_string().data(), req.method_string().size()),
                               std::string_view(req.target().data(), req.target().size()), req.body());
        } catch (const std::exception& e) {
            r = HttpReply{500, nlohmann::json{{"error", e.what()}}};
        }
        return reply(req, r.status, r.body.dump());
    }

    void stream(tcp::socket& sock, http::request<http::string_body> req) {
        const std::string_view target(req.target().data(), req.target().size());
        std::optional<StreamTarget> st;
        std::shared_ptr<Session> session;
        int status = 0;
        std::string error;
        try {
            st = parse_stream_target(target);
            if (!st) {
                status = 404;
                error = "no such stream";
            } else if (!(session = sessions.get(st->session_id))) {
                status = 404;
                error = "unknown session '" + st->session_id + "'";
            }
        } catch (const CommandError& e) {
            status = e.status();
            error = e.what();
        }
        if (status != 0) {
            beast::error_code ec;
            auto res = reply(req, status, nlohmann::json{{"error", error}}.dump());
            res.keep_alive(false);
            http::write(sock, res, ec);
            return;
        }

        websocket::stream<tcp::socket&> ws(sock);
        ws.set_option(websocket::stream_base::decorator(
            [](websocket::response_type& res) { res.set(http::field::server, "rfglove"); }));
        ws.accept(req);
        ws.text(true);
        std::uint64_t next = st->from;
        for (;;) {
            const auto msgs = session->wait_from(next, kStreamPoll);
            for (const auto& m : msgs) {
                ws.write(net::buffer(m.to_json().dump()));
                next = m.seq + 1;
            }
            if (stopping) {
                beast::error_code ec;
                ws.close(websocket::close_code::going_away, ec);
                return;
            }
            if (msgs.empty() && session->closed()) {
                beast::error_code ec;
                ws.close(websocket::close_code::normal, ec);
                return;
            }
            if (peer_readable(sock.native_handle())) {
                // Client frames are not commands; reading lets close and ping through.
                beast::flat_buffer in;
                beast::error_code ec;
                ws.read(in, ec);
                if (ec) return;
            }
        }
    }

    void stop() {
        if (stopping.exchange(true)) return;
        beast::error_code ec;
        ::shutdown(acceptor.native_handle(), SHUT_RDWR);
        if (accept_thread.joinable()) accept_thread.join();
        acceptor.close(ec);
        {
            std::lock_guard lock(mu);
            for (auto& c : conns) {
                if (!c.done) ::shutdown(c.fd, SHUT_RDWR);
            }
        }
        for (auto& c : conns) c.thread.join();
        conns.clear();
    }

    SessionManager& sessions;
    net::io_context ioc;
    tcp::acceptor acceptor;
    std::uint16_t bound_port = 0;
    std::atomic<bool> stopping{false};
    std::thread accept_thread;
    std::mutex mu;
    std::list<Connection> conns;
};

Server::Server(SessionManager& sessions, const std::string& address, std::uint16_t port)
    : impl_(std::make_unique<Impl>(sessions, address, port)) {}

Server::~Server() { stop(); }

std::uint16_t Server::port() const noexcept { return impl_->bound_port; }

void Server::start() {
    impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
}

void Server::run() { impl_->accept_loop(); }

void Server::stop() { impl_->stop(); }

}  // namespace rfglove
