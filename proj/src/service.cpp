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
#include "rfglove/service.hpp"

#include <charconv>
#include <cmath>

#include "rfglove/error.hpp"
#include "rfglove/json_io.hpp"

namespace rfglove {
namespace {

using nlohmann::json;

double number_field(const json& body, const char* key) {
    const auto it = body.find(key);
    if (it == body.end()) throw CommandError(400, std::string("missing field '") + key + "'");
    if (!it->is_number()) throw CommandError(400, std::string("field '") + key + "' must be a number");
    return it->get<double>();
}

std::optional<Millis> elapse_field(const json& body) {
    if (!body.contains("dt_ms")) return std::nullopt;
    const double dt = number_field(body, "dt_ms");
    if (dt < 1.0 || dt != std::floor(dt)) throw CommandError(400, "dt_ms must be a whole number >= 1");
    return Millis{static_cast<std::int64_t>(dt)};
}

json parse_body(std::string_view text) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
    json body = json::parse(text, nullptr, false);
    if (body.is_discarded()) throw CommandError(400, "body is not valid JSON");
    if (!body.is_object()) throw CommandError(400, "body must be a JSON object");
    return body;
}

DeviceConfig config_from(const json& body) {
    DeviceConfig cfg;
    if (!body.contains("config")) return cfg;
    const json& c = body["config"];
    if (!c.is_object()) throw CommandError(400, "config must be an object");
    for (const auto& [key, value] : c.items()) {
        if (key == "record_duration_ms" || key == "context_timeout_ms") {
            if (!value.is_number_integer()) throw CommandError(400, "config." + key + " must be an integer");
            (key == "record_duration_ms" ? cfg.record_duration : cfg.context_timeout) = Millis{value.get<std::int64_t>()};
        } else if (key == "playback_preemptible") {
            if (!value.is_boolean()) throw CommandError(400, "config.playback_preemptible must be a boolean");
            cfg.playback_preemptible = value.get<bool>();
        } else {
            throw CommandError(400, "unknown config key '" + key + "'");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw CommandError(400, e.what());
    }
    return cfg;
}

json messages_json(const std::vector<StreamMessage>& msgs) {
    json a = json::array();
    for (const auto& m : msgs) a.push_back(m.to_json());
    return a;
}

HttpReply error_reply(int status, const std::string& what) { return HttpReply{status, json{{"error", what}}}; }

std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        const auto slash = path.find('/', start);
        const auto part = path.substr(start, slash == std::string_view::npos ? path.npos : slash - start);
        if (!part.empty()) parts.push_back(part);
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    return parts;
}

}  // namespace

json StreamMessage::to_json() const { return {{"seq", seq}, {"t_ms", t_ms}, {"kind", kind}, {"data", data}}; }

Session::Session(std::string id, Scene scene, DeviceConfig cfg, RfParams rf)
    : id_(std::move(id)), scene_(std::move(scene)), tags_(scene_.tag_placements()), rf_(rf), device_(db_, cfg) {}

void Session::push(std::string kind, json data) {
    StreamMessage m;
    m.seq = log_.size() + 1;
    m.t_ms = device_.clock_ms();
    m.kind = std::move(kind);
    m.data = std::move(data);
    log_.push_back(std::move(m));
}

void Session::apply(DeviceEvent ev) {
    const TraceEntry& e = device_.apply(std::move(ev));
    json data{{"event", rfglove::to_json(e.event)}};
    if (e.error) data["error"] = *e.error;
    if (e.note) data["note"] = *e.note;
    push("event", std::move(data));
    for (const auto& a : e.actions) push("action", rfglove::to_json(a));
}

std::vector<StreamMessage> Session::run(std::optional<Millis> elapse, const std::function<void()>& body) {
    std::vector<StreamMessage> out;
    {
        std::lock_guard lock(mu_);
        if (closed_) throw CommandError(404, "session " + id_ + " is closed");
        const std::size_t first = log_.size();
        if (elapse) apply(Tick{*elapse});
        body();
        push("state", rfglove::to_json(device_.state()));
        out.assign(log_.begin() + static_cast<std::ptrdiff_t>(first), log_.end());
    }
    cv_.notify_all();
    return out;
}

std::vector<StreamMessage> Session::pose(const HandPose& pose, std::optional<Millis> elapse) {
    return run(elapse, [&] {
        pose_ = pose;
        const auto hit = scan(pose, tags_, rf_);
        if (!hit) return;
        push("read", rfglove::to_json(*hit));
        apply(Tick{Millis{std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(hit->latency_ms)))}});
        apply(TagRead{hit->uid, hit->latency_ms});
    });
}

std::vector<StreamMessage> Session::button(std::optional<Millis> elapse) {
    return run(elapse, [&] { apply(ButtonDown{}); });
}

std::vector<StreamMessage> Session::recording(const std::string& label) {
    return run(std::nullopt, [&] {
        const auto* rec = std::get_if<RecordingMode>(&device_.state().mode);
        if (rec == nullptr) {
            throw CommandError(409, std::string("device is in ") + std::string(mode_name(device_.state())) +
                                        ", not RECORDING");
        }
        const Millis remaining = device_.config().record_duration - rec->elapsed;
        apply(RecordingInput{label, "pcm:" + label});
        apply(Tick{std::max(remaining, Millis{1})});
    });
}

std::vector<StreamMessage> Session::tick(Millis dt) {
    if (dt.count() < 1) throw CommandError(400, "dt_ms must be >= 1");
    return run(std::nullopt, [&] { apply(Tick{dt}); });
}

json Session::state_json() const {
    std::lock_guard lock(mu_);
    return rfglove::to_json(device_.state());
}

json Session::snapshot() const {
    std::lock_guard lock(mu_);
    json bindings = json::array();
    for (const auto& [uid, clip] : db_.bindings()) {
        json b = rfglove::to_json(clip);
        b["uid"] = uid.hex();
        bindings.push_back(std::move(b));
    }
    return {{"id", id_},
            {"clock_ms", device_.clock_ms()},
            {"state", rfglove::to_json(device_.state())},
            {"pose", rfglove::to_json(pose_)},
            {"bindings", std::move(bindings)},
            {"messages", log_.size()}};
}

json Session::scene_json() const { return scene_to_json(scene_); }

std::vector<StreamMessage> Session::log() const {
    std::lock_guard lock(mu_);
    return log_;
}

std::vector<StreamMessage> Session::wait_from(std::uint64_t from, Millis timeout) const {
    if (from == 0) from = 1;
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return closed_ || log_.size() >= from; });
    if (log_.size() < from) return {};
    return std::vector<StreamMessage>(log_.begin() + static_cast<std::ptrdiff_t>(from - 1), log_.end());
}

void Session::close() {
    {
        std::lock_guard lock(mu_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool Session::closed() const {
    std::lock_guard lock(mu_);
    return closed_;
}

std::shared_ptr<Session> SessionManager::create(Scene scene, DeviceConfig cfg) {
    scene.validate();
    cfg.validate();
    std::lock_guard lock(mu_);
    std::string id = "s" + std::to_string(next_id_++);
    auto s = std::make_shared<Session>(id, std::move(scene), cfg);
    sessions_.emplace(std::move(id), s);
    return s;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

bool SessionManager::remove(const std::string& id) {
    std::shared_ptr<Session> s;
    {
        std::lock_guard lock(mu_);
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) return false;
        s = std::move(it->second);
        sessions_.erase(it);
    }
    s->close();
    return true;
}

std::size_t SessionManager::size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

void SessionManager::close_all() {
    std::lock_guard lock(mu_);
    for (auto& [id, s] : sessions_) s->close();
}

std::optional<StreamTarget> parse_stream_target(std::string_view target) {
    const auto q = target.find('?');
    const auto parts = split_path(target.substr(0, q));
    if (parts.size() != 3 || parts[0] != "sessions" || parts[2] != "events") return std::nullopt;
    StreamTarget st{std::string(parts[1]), 1};
    if (q == std::string_view::npos) return st;
    std::string_view query = target.substr(q + 1);
    while (!query.empty()) {
        const auto amp = query.find('&');
        const auto kv = query.substr(0, amp);
        query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
        if (kv.rfind("from=", 0) != 0) continue;
        const auto v = kv.substr(5);
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), st.from);
        if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
            throw CommandError(400, "from must be a non-negative integer");
        }
    }
    if (st.from == 0) st.from = 1;
    return st;
}

HttpReply handle_request(SessionManager& sessions, std::string_view method, std::string_view target,
                         std::string_view body_text) {
    try {
        const auto parts = split_path(target.substr(0, target.find('?')));
        if (parts.empty() || parts[0] != "sessions") return error_reply(404, "no such route");

        if (parts.size() == 1) {
            if (method != "POST") return error_reply(405, "use POST /sessions");
            const json body = parse_body(body_text);
            Scene scene;
            if (body.contains("scene")) {
                try {
                    scene = scene_from_json(body["scene"]);
                } catch (const SchemaError& e) {
                    return error_reply(400, std::string("scene.") + e.what());
                }
            } else {
                const double setup = number_field(body, "setup");
                const double seed = body.contains("seed") ? number_field(body, "seed") : 1.0;
                if (setup != std::floor(setup) || setup < 1 || setup > 4) return error_reply(400, "setup must be 1..4");
                if (seed < 0 || seed != std::floor(seed)) return error_reply(400, "seed must be a non-negative integer");
                scene = build_setup(static_cast<int>(setup), body["seed"].is_number_unsigned()
                                                                  ? body["seed"].get<std::uint64_t>()
                                                                  : static_cast<std::uint64_t>(seed));
            }
            const DeviceConfig cfg = config_from(body);
            std::shared_ptr<Session> s;
            try {
                s = sessions.create(std::move(scene), cfg);
            } catch (const SchemaError& e) {
                return error_reply(400, std::string("scene.") + e.what());
            }
            return HttpReply{201, json{{"id", s->id()}, {"state", s->state_json()}}};
        }

        const auto session = sessions.get(std::string(parts[1]));
        if (!session) return error_reply(404, "unknown session '" + std::string(parts[1]) + "'");

        if (parts.size() == 2) {
            if (method == "GET") return HttpReply{200, session->snapshot()};
            if (method == "DELETE") {
                sessions.remove(session->id());
                return HttpReply{200, json{{"deleted", session->id()}}};
            }
            return error_reply(405, "use GET or DELETE");
        }
        if (parts.size() != 3) return error_reply(404, "no such route");

        const std::string_view verb = parts[2];
        if (verb == "scene" || verb == "log") {
            if (method != "GET") return error_reply(405, "use GET");
            if (verb == "scene") return HttpReply{200, session->scene_json()};
            return HttpReply{200, json{{"messages", messages_json(session->log())}}};
        }
        if (verb == "events") return error_reply(426, "events is a WebSocket endpoint");

        if (method != "POST") return error_reply(405, "use POST");
        const json body = parse_body(body_text);
        std::vector<StreamMessage> msgs;
        if (verb == "pose") {
            msgs = session->pose(
                HandPose(number_field(body, "x_mm"), number_field(body, "y_mm"), number_field(body, "facing_deg")),
                elapse_field(body));
        } else if (verb == "button") {
            msgs = session->button(elapse_field(body));
        } else if (verb == "recording") {
            const auto it = body.find("label");
            if (it == body.end() || !it->is_string()) throw CommandError(400, "field 'label' must be a string");
            const std::string label = it->get<std::string>();
            if (label.empty() || label.find_first_of("\t\r\n") != std::string::npos) {
                throw CommandError(400, "label must be non-empty and single-line");
            }
            msgs = session->recording(label);
        } else if (verb == "tick") {
            const auto dt = elapse_field(body);
            if (!dt) throw CommandError(400, "missing field 'dt_ms'");
            msgs = session->tick(*dt);
        } else {
            return error_reply(404, "no such route");
        }
        return HttpReply{200, json{{"state", session->state_json()}, {"messages", messages_json(msgs)}}};
    } catch (const CommandError& e) {
        return error_reply(e.status(), e.what());
    }
}

}  // namespace rfglove
