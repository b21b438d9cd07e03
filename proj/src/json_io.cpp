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
#include "rfglove/json_io.hpp"

#include <cmath>

namespace rfglove {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double round6(double v) {
    if (!std::isfinite(v)) return v;
    const double r = std::round(v * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r;
}

nlohmann::json to_json(const AudioClip& clip) {
    return {{"clip_id", clip.clip_id}, {"duration_ms", clip.duration.count()}, {"label", clip.label}};
}

nlohmann::json to_json(const DeviceEvent& event) {
    nlohmann::json j{{"type", std::string(event_name(event))}};
    std::visit(overloaded{
                   [&](const TagRead& e) {
                       j["uid"] = e.uid.hex();
                       j["latency_ms"] = round6(e.latency_ms);
                   },
                   [](const ButtonDown&) {},
                   [&](const RecordingInput& e) {
                       j["label"] = e.label;
                       j["payload_bytes"] = e.payload.size();
                   },
                   [&](const Tick& e) { j["dt_ms"] = e.dt.count(); },
               },
               event);
    return j;
}

nlohmann::json to_json(const DeviceAction& action) {
    nlohmann::json j{{"type", std::string(action_name(action))}, {"uid", action_uid(action)->hex()}};
    if (const auto* a = std::get_if<StoreBinding>(&action)) j["clip"] = to_json(a->clip);
    if (const auto* a = std::get_if<PlayClip>(&action)) j["clip"] = to_json(a->clip);
    return j;
}

nlohmann::json to_json(const DeviceState& state) {
    nlohmann::json j{{"mode", std::string(mode_name(state))}};
    std::visit(overloaded{
                   [](const DetectMode&) {},
                   [&](const PromptNewMode& m) {
                       j["uid"] = m.uid.hex();
                       j["age_ms"] = m.age.count();
                   },
                   [&](const RecordingMode& m) {
                       j["uid"] = m.uid.hex();
                       j["elapsed_ms"] = m.elapsed.count();
                       j["input_label"] = m.input ? nlohmann::json(m.input->label) : nlohmann::json(nullptr);
                   },
                   [&](const PlaybackMode& m) {
                       j["uid"] = m.uid.hex();
                       j["elapsed_ms"] = m.elapsed.count();
                       j["clip"] = to_json(m.clip);
                   },
               },
               state.mode);
    if (state.last_read) {
        j["last_read"] = {{"uid", state.last_read->uid.hex()}, {"age_ms", state.last_read->age.count()}};
    } else {
        j["last_read"] = nullptr;
    }
    return j;
}

nlohmann::json to_json(const TraceEntry& entry) {
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& a : entry.actions) actions.push_back(to_json(a));
    nlohmann::json j{{"t_ms", entry.t_ms}, {"event", to_json(entry.event)}, {"actions", std::move(actions)}};
    if (entry.error) j["error"] = *entry.error;
    if (entry.note) j["note"] = *entry.note;
    return j;
}

nlohmann::json to_json(const ReadResult& read) {
    return {{"uid", read.uid.hex()},
            {"distance_mm", round6(read.distance_mm)},
            {"offset_deg", round6(read.offset_deg)},
            {"latency_ms", round6(read.latency_ms)},
            {"gain_dbi", round6(read.gain_dbi)}};
}

nlohmann::json to_json(const HandPose& pose) {
    return {{"x_mm", round6(pose.x_mm)}, {"y_mm", round6(pose.y_mm)}, {"facing_deg", round6(pose.facing_deg)}};
}

nlohmann::json summary_json(const TrialTranscript& t) {
    nlohmann::json times = nlohmann::json::array();
    for (double s : t.per_attempt_times_s) times.push_back(round6(s));
    nlohmann::json placements = nlohmann::json::array();
    for (const auto& p : t.placements) {
        placements.push_back(
            {{"object_id", p.object_id}, {"target_id", p.target_id}, {"correct", p.correct}, {"t_ms", p.t_ms}});
    }
    nlohmann::json aux = nlohmann::json::object();
    for (const auto& [k, v] : t.aux) aux[k] = round6(v);
    nlohmann::json j{{"participant_id", t.participant_id},
                     {"seed", t.seed},
                     {"with_glove", t.with_glove},
                     {"correct", t.correct},
                     {"errors", t.errors},
                     {"completed", t.completed},
                     {"times_s", std::move(times)},
                     {"placements", std::move(placements)},
                     {"aux", std::move(aux)},
                     {"events", t.events.size()}};
    if (!t.attempt_success.empty()) {
        j["attempt_success"] = nlohmann::json(std::vector<bool>(t.attempt_success));
    }
    return j;
}

std::string trace_jsonl(const std::vector<TraceEntry>& trace) {
    std::string out;
    for (const auto& e : trace) {
        out += to_json(e).dump();
        out += '\n';
    }
    return out;
}

}  // namespace rfglove
