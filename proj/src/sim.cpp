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
#include "rfglove/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "rfglove/error.hpp"
#include "rfglove/json_io.hpp"

namespace rfglove {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Tokens {
    std::vector<std::string_view> words;
    // Text after the first word, for label arguments.
    std::string_view rest_after(std::size_t word) const {
        if (word >= words.size()) return {};
        const char* start = words[word].data();
        const char* end = words.back().data() + words.back().size();
        return std::string_view(start, static_cast<std::size_t>(end - start));
    }
};

Tokens split(std::string_view line) {
    Tokens t;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) t.words.push_back(line.substr(start, i - start));
    }
    return t;
}

double number(std::string_view s, std::size_t line, const char* what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError(line, std::string(what) + ": not a number: '" + std::string(s) + "'");
    }
    return v;
}

TagUid uid_arg(std::string_view s, std::size_t line) {
    TagUid uid;
    if (!TagUid::try_parse(s, uid)) throw ParseError(line, "bad tag uid '" + std::string(s) + "'");
    return uid;
}

void arity(const Tokens& t, std::size_t lo, std::size_t hi, std::size_t line) {
    const std::size_t n = t.words.size() - 1;
    if (n < lo || n > hi) {
        throw ParseError(line, std::string(t.words[0]) + ": expected " +
                                   (lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi)) +
                                   " arguments, got " + std::to_string(n));
    }
}

}  // namespace

Millis latency_tick(double latency_ms) {
    return Millis{std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(latency_ms)))};
}

std::vector<ScriptLine> parse_script(std::string_view text) {
    std::vector<ScriptLine> out;
    bool device_started = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;

        const Tokens t = split(raw);
        const std::string_view cmd = t.words[0];
        ScriptCommand command;
        if (cmd == "bind") {
            if (t.words.size() < 3) throw ParseError(line_no, "bind: expected <uid> <label>");
            if (device_started) throw ParseError(line_no, "bind must come before device commands");
            command = ScriptBind{uid_arg(t.words[1], line_no), std::string(t.rest_after(2))};
        } else if (cmd == "pose") {
            arity(t, 3, 3, line_no);
            command = ScriptPose{HandPose(number(t.words[1], line_no, "x"), number(t.words[2], line_no, "y"),
                                          number(t.words[3], line_no, "facing"))};
        } else if (cmd == "tag") {
            arity(t, 1, 2, line_no);
            ScriptTag tag{uid_arg(t.words[1], line_no), 0.0};
            if (t.words.size() == 3) tag.latency_ms = number(t.words[2], line_no, "latency");
            if (tag.latency_ms < 0.0) throw ParseError(line_no, "latency must be >= 0");
            command = tag;
        } else if (cmd == "button") {
            arity(t, 0, 0, line_no);
            command = ScriptButton{};
        } else if (cmd == "record") {
            if (t.words.size() < 2) throw ParseError(line_no, "record: expected a label");
            command = ScriptRecord{std::string(t.rest_after(1))};
        } else if (cmd == "tick") {
            arity(t, 1, 1, line_no);
            const double dt = number(t.words[1], line_no, "dt");
            if (dt < 1.0 || dt != std::floor(dt)) throw ParseError(line_no, "tick needs a whole number of ms >= 1");
            command = ScriptTick{Millis{static_cast<std::int64_t>(dt)}};
        } else {
            throw ParseError(line_no, "unknown command '" + std::string(cmd) + "'");
        }
        if (!std::holds_alternative<ScriptBind>(command)) device_started = true;
        out.push_back(ScriptLine{line_no, std::move(command)});
    }
    return out;
}

nlohmann::json run_sim(const Scene& scene, const std::vector<ScriptLine>& script, TagDatabase& db,
                       const DeviceConfig& cfg, const RfParams& rf) {
    cfg.validate();
    rf.validate();
    const auto tags = scene.tag_placements();
    DeviceRunner device(db, cfg);
    nlohmann::json trace = nlohmann::json::array();
    nlohmann::json scans = nlohmann::json::array();

    auto apply = [&](std::size_t line, DeviceEvent ev) {
        nlohmann::json j = to_json(device.apply(std::move(ev)));
        j["line"] = line;
        trace.push_back(std::move(j));
    };

    for (const auto& [line, command] : script) {
        if (const auto* b = std::get_if<ScriptBind>(&command)) {
            try {
                db.bind(b->uid, make_clip(b->uid, b->label, "pcm:" + b->label, cfg.record_duration));
            } catch (const std::invalid_argument& e) {
                throw ParseError(line, e.what());
            }
        } else if (const auto* p = std::get_if<ScriptPose>(&command)) {
            const auto hit = scan(p->pose, tags, rf);
            scans.push_back({{"line", line},
                             {"t_ms", device.clock_ms()},
                             {"pose", to_json(p->pose)},
                             {"read", hit ? to_json(*hit) : nlohmann::json(nullptr)}});
            if (hit) {
                apply(line, Tick{latency_tick(hit->latency_ms)});
                apply(line, TagRead{hit->uid, hit->latency_ms});
            }
        } else if (const auto* tg = std::get_if<ScriptTag>(&command)) {
            if (tg->latency_ms > 0.0) apply(line, Tick{latency_tick(tg->latency_ms)});
            apply(line, TagRead{tg->uid, tg->latency_ms});
        } else if (std::holds_alternative<ScriptButton>(command)) {
            apply(line, ButtonDown{});
        } else if (const auto* r = std::get_if<ScriptRecord>(&command)) {
            apply(line, RecordingInput{r->label, "pcm:" + r->label});
        } else if (const auto* tk = std::get_if<ScriptTick>(&command)) {
            apply(line, Tick{tk->dt});
        }
    }

    nlohmann::json bindings = nlohmann::json::array();
    for (const auto& [uid, clip] : db.bindings()) {
        nlohmann::json b = to_json(clip);
        b["uid"] = uid.hex();
        bindings.push_back(std::move(b));
    }
    return {{"scene", {{"setup", scene.setup}, {"seed", scene.seed}}},
            {"config",
             {{"record_duration_ms", cfg.record_duration.count()},
              {"context_timeout_ms", cfg.context_timeout.count()},
              {"playback_preemptible", cfg.playback_preemptible}}},
            {"trace", std::move(trace)},
            {"scans", std::move(scans)},
            {"final_state", to_json(device.state())},
            {"clock_ms", device.clock_ms()},
            {"bindings", std::move(bindings)}};
}

}  // namespace rfglove
