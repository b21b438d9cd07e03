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
#include <chrono>
#include <cstdlib>
#include <future>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "doctest.h"
#include "rfglove/scene.hpp"
#include "rfglove/server.hpp"

using namespace rfglove;
using nlohmann::json;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

struct Reply {
    int status;
    json body;
};

Reply request(std::uint16_t port, http::verb verb, const std::string& target, const std::string& body = "") {
    net::io_context ioc;
    beast::tcp_stream stream(ioc);
    stream.connect(tcp::endpoint(net::ip::make_address("127.0.0.1"), port));
    http::request<http::string_body> req{verb, target, 11};
    req.set(http::field::host, "127.0.0.1");
    req.set(http::field::content_type, "application/json");
    req.body() = body;
    req.prepare_payload();
    http::write(stream, req);
    beast::flat_buffer buf;
    http::response<http::string_body> res;
    http::read(stream, buf, res);
    beast::error_code ec;
    stream.socket().shutdown(tcp::socket::shutdown_both, ec);
    return {static_cast<int>(res.result_int()), res.body().empty() ? json() : json::parse(res.body())};
}

class Stream {
public:
    Stream(std::uint16_t port, const std::string& target) : ws_(ioc_) {
        ws_.next_layer().connect(tcp::endpoint(net::ip::make_address("127.0.0.1"), port));
        ws_.handshake("127.0.0.1", target);
    }
    json next() {
        beast::flat_buffer buf;
        ws_.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    }
    std::vector<json> take(std::size_t n) {
        std::vector<json> out;
        while (out.size() < n) out.push_back(next());
        return out;
    }
    void close() { ws_.close(websocket::close_code::normal); }
    websocket::stream<tcp::socket>& ws() { return ws_; }

private:
    net::io_context ioc_;
    websocket::stream<tcp::socket> ws_;
};

json pose_over(const SceneObject& o) {
    return json{{"x_mm", o.x_mm}, {"y_mm", o.y_mm - 20.0}, {"facing_deg", 90.0}};
}

struct Fixture {
    SessionManager sessions;
    Server server{sessions, "127.0.0.1", 0};
    Fixture() { server.start(); }
    ~Fixture() { server.stop(); }
    std::string create() {
        const auto r = request(server.port(), http::verb::post, "/sessions", R"({"setup":1,"seed":1})");
        REQUIRE(r.status == 201);
        return r.body.at("id").get<std::string>();
    }
};

}  // namespace

TEST_SUITE("server") {

TEST_CASE("default port from the environment") {
    ::setenv("RFGLOVE_PORT", "9123", 1);
    CHECK(default_port() == 9123);
    ::setenv("RFGLOVE_PORT", "junk", 1);
    CHECK(default_port(8080) == 8080);
    ::unsetenv("RFGLOVE_PORT");
    CHECK(default_port(7000) == 7000);
}

TEST_CASE("HTTP routes over a socket") {
    Fixture f;
    CHECK(f.server.port() != 0);
    const auto id = f.create();
    const auto obj = build_setup(1, 1).objects.front();
    auto r = request(f.server.port(), http::verb::post, "/sessions/" + id + "/pose", pose_over(obj).dump());
    CHECK(r.status == 200);
    CHECK(r.body.at("state").at("mode") == "PROMPT_NEW");
    CHECK(request(f.server.port(), http::verb::get, "/sessions/nope").status == 404);
    CHECK(request(f.server.port(), http::verb::post, "/sessions", "{").status == 400);
    CHECK(request(f.server.port(), http::verb::post, "/sessions/" + id + "/recording", R"({"label":"x"})").status ==
          409);
    CHECK(request(f.server.port(), http::verb::options, "/sessions").status == 204);
}

TEST_CASE("event stream carries the scan flow") {
    Fixture f;
    const auto id = f.create();
    Stream events(f.server.port(), "/sessions/" + id + "/events");
    const auto obj = build_setup(1, 1).objects.front();
    request(f.server.port(), http::verb::post, "/sessions/" + id + "/pose", pose_over(obj).dump());
    const auto msgs = events.take(5);
    CHECK(msgs[0].at("kind") == "read");
    CHECK(msgs[1].at("data").at("event").at("type") == "Tick");
    CHECK(msgs[2].at("data").at("event").at("type") == "TagRead");
    CHECK(msgs[3].at("data").at("type") == "NotifyNewTag");
    CHECK(msgs[4].at("kind") == "state");
    for (std::size_t i = 0; i < msgs.size(); ++i) CHECK(msgs[i].at("seq") == i + 1);
    events.close();
}

TEST_CASE("reconnect with from resumes without duplicates") {
    Fixture f;
    const auto id = f.create();
    const auto scene = build_setup(1, 1);
    const std::string base = "/sessions/" + id;
    for (const auto& o : scene.objects) {
        request(f.server.port(), http::verb::post, base + "/pose", pose_over(o).dump());
        request(f.server.port(), http::verb::post, base + "/button", "{}");
    }
    const auto log = request(f.server.port(), http::verb::get, base + "/log").body.at("messages");
    REQUIRE(log.size() > 10);

    std::vector<json> feed;
    {
        Stream first(f.server.port(), base + "/events");
        for (auto& m : first.take(7)) feed.push_back(m);
        first.close();
    }
    Stream second(f.server.port(), base + "/events?from=" + std::to_string(feed.back().at("seq").get<int>() + 1));
    for (auto& m : second.take(log.size() - feed.size())) feed.push_back(m);
    second.close();
    REQUIRE(feed.size() == log.size());
    for (std::size_t i = 0; i < feed.size(); ++i) CHECK(feed[i] == log[i]);
}

TEST_CASE("two sessions do not cross-talk") {
    Fixture f;
    const auto a = f.create();
    const auto b = f.create();
    Stream sb(f.server.port(), "/sessions/" + b + "/events");
    const auto scene = build_setup(1, 1);
    for (int i = 0; i < 3; ++i) {
        request(f.server.port(), http::verb::post, "/sessions/" + a + "/pose", pose_over(scene.objects[i]).dump());
    }
    request(f.server.port(), http::verb::post, "/sessions/" + b + "/tick", R"({"dt_ms":42})");
    const auto msgs = sb.take(2);
    CHECK(msgs[0].at("seq") == 1);
    CHECK(msgs[0].at("data").at("event").at("dt_ms") == 42);
    CHECK(msgs[1].at("kind") == "state");
    CHECK(msgs[1].at("seq") == 2);
    sb.close();
}

TEST_CASE("unknown session stream is refused") {
    Fixture f;
    CHECK_THROWS(Stream(f.server.port(), "/sessions/zz/events"));
}

TEST_CASE("stop ends open streams") {
    auto f = std::make_unique<Fixture>();
    const auto id = f->create();
    Stream s(f->server.port(), "/sessions/" + id + "/events");
    auto reader = std::async(std::launch::async, [&] {
        try {
            s.next();
        } catch (const std::exception&) {
        }
        return true;
    });
    const auto t0 = std::chrono::steady_clock::now();
    f->sessions.close_all();
    f->server.stop();
    CHECK(reader.wait_for(std::chrono::seconds(5)) == std::future_status::ready);
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
}

}
