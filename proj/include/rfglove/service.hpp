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
#pragma once

// Live glove sessions for interactive clients.
//
// HTTP (JSON bodies, JSON replies):
//   POST   /sessions                   {"setup":1,"seed":7} or {"scene":{...}},
//                                      optional "config":{"record_duration_ms",
//                                      "context_timeout_ms","playback_preemptible"}
//                                      -> 201 {"id":..., "state":...}
//   POST   /sessions/{id}/pose         {"x_mm","y_mm","facing_deg"}
//   POST   /sessions/{id}/button       {}
//   POST   /sessions/{id}/recording    {"label"}; 409 unless RECORDING; the rest
//                                      of the recording window elapses so the
//                                      clip is stored
//   POST   /sessions/{id}/tick         {"dt_ms"}
//   GET    /sessions/{id}              state, pose, clock, bindings
//   GET    /sessions/{id}/scene        scene JSON
//   GET    /sessions/{id}/log          {"messages":[...]} every message so far
//   DELETE /sessions/{id}
//   pose and button bodies may carry "dt_ms" (>= 1): that much time elapses
//   first.
//   Commands reply {"state":..., "messages":[...messages they produced]}.
//   Errors reply {"error": "..."} with 400 (bad body), 404 (unknown session
//   or route), 405 or 409.
//
// WebSocket /sessions/{id}/events?from=N streams messages with seq >= N
// (default 1), backlog first, one JSON object per frame:
//   {"seq":1,"t_ms":0,"kind":"read"|"event"|"action"|"state","data":{...}}
// "read" is a ReadResult, "event" a trace entry (event plus error/note),
// "action" a DeviceAction, "state" the device state after a command. For a
// scan hit the order is read, Tick event, TagRead event, its actions, state.

#include <condition_variable>
#include <functional>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rfglove/device.hpp"
#include "rfglove/rfmodel.hpp"
#include "rfglove/scene.hpp"
#include "rfglove/tagdb.hpp"

namespace rfglove {

struct StreamMessage {
    std::uint64_t seq = 0;
    std::int64_t t_ms = 0;
    std::string kind;
    nlohmann::json data;

    nlohmann::json to_json() const;
};

/// Rejected command; `status` is the HTTP status to report.
class CommandError : public std::runtime_error {
public:
    CommandError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

class Session {
public:
    Session(std::string id, Scene scene, DeviceConfig cfg, RfParams rf = {});
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const noexcept { return id_; }

    /// Each command runs atomically with respect to other commands and
    /// returns the messages it appended. `elapse` (if set) is applied first.
    std::vector<StreamMessage> pose(const HandPose& pose, std::optional<Millis> elapse = {});
    std::vector<StreamMessage> button(std::optional<Millis> elapse = {});
    /// Throws CommandError(409) outside RECORDING.
    std::vector<StreamMessage> recording(const std::string& label);
    std::vector<StreamMessage> tick(Millis dt);

    nlohmann::json snapshot() const;
    nlohmann::json scene_json() const;
    nlohmann::json state_json() const;
    std::vector<StreamMessage> log() const;

    /// Blocks until a message with seq >= from exists, the session is closed
    /// or `timeout` passes; returns the messages with seq >= from.
    std::vector<StreamMessage> wait_from(std::uint64_t from, Millis timeout) const;

    void close();
    bool closed() const;

private:
    std::vector<StreamMessage> run(std::optional<Millis> elapse, const std::function<void()>& body);
    void push(std::string kind, nlohmann::json data);
    void apply(DeviceEvent ev);

    std::string id_;
    Scene scene_;
    std::vector<TagPlacement> tags_;
    RfParams rf_;
    TagDatabase db_;
    DeviceRunner device_;
    HandPose pose_;

    mutable std::mutex mu_;
    mutable std::condition_variable cv_;
    std::vector<StreamMessage> log_;
    bool closed_ = false;
};

class SessionManager {
public:
    /// Validates the scene; throws SchemaError or std::invalid_argument.
    std::shared_ptr<Session> create(Scene scene, DeviceConfig cfg = {});
    std::shared_ptr<Session> get(const std::string& id) const;
    /// Closes and forgets the session; false if it did not exist.
    bool remove(const std::string& id);
    std::size_t size() const;
    /// Closes every session, waking all stream readers.
    void close_all();

private:
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_id_ = 1;
};

struct HttpReply {
    int status = 200;
    nlohmann::json body;
};

/// Routes one HTTP request (target may include a query string).
HttpReply handle_request(SessionManager& sessions, std::string_view method, std::string_view target,
                         std::string_view body);

/// Parses "/sessions/{id}/events?from=N". Returns nullopt for other targets
/// and throws CommandError(400) for a malformed "from".
struct StreamTarget {
    std::string session_id;
    std::uint64_t from = 1;
};
std::optional<StreamTarget> parse_stream_target(std::string_view target);

}  // namespace rfglove
