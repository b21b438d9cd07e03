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
#include "rfglove/device.hpp"

#include <algorithm>
#include <stdexcept>

#include "rfglove/error.hpp"

namespace rfglove {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

class Stepper {
public:
    Stepper(const DeviceState& state, TagDatabase& db, const DeviceConfig& cfg)
        : db_(db), cfg_(cfg) {
        out_.state = state;
    }

    StepResult run(const DeviceEvent& event) && {
        std::visit(overloaded{
                       [&](const TagRead& e) { on_read(e); },
                       [&](const ButtonDown&) { on_button(); },
                       [&](const RecordingInput& e) { on_input(e); },
                       [&](const Tick& e) { on_tick(e); },
                   },
                   event);
        return std::move(out_);
    }

private:
    DeviceState& st() { return out_.state; }

    void fail(const std::string& what) {
        out_.error = what;
        st().mode = DetectMode{};
    }

    void detect(const TagUid& uid) {
        st().last_read = LastRead{uid, Millis{0}};
        if (const AudioClip* clip = db_.find(uid)) {
            st().mode = PlaybackMode{uid, *clip, Millis{0}};
            out_.actions.emplace_back(PlayClip{uid, *clip});
        } else {
            st().mode = PromptNewMode{uid, Millis{0}};
            out_.actions.emplace_back(NotifyNewTag{uid});
        }
    }

    void start_recording(const TagUid& uid) {
        st().mode = RecordingMode{uid, Millis{0}, std::nullopt};
        out_.actions.emplace_back(StartRecording{uid});
    }

    void replace(const TagUid& uid) {
        try {
            db_.remove(uid);
        } catch (const PersistenceError& e) {
            fail(e.what());
            return;
        }
        out_.actions.emplace_back(DeleteBinding{uid});
        start_recording(uid);
    }

    bool fresh_context() const {
        const auto& last = out_.state.last_read;
        return last && last->age < cfg_.context_timeout;
    }

    void on_read(const TagRead& e) {
        auto& mode = st().mode;
        if (std::holds_alternative<RecordingMode>(mode)) {
            out_.note = "tag read ignored while recording";
        } else if (auto* prompt = std::get_if<PromptNewMode>(&mode)) {
            if (prompt->uid == e.uid) {
                prompt->age = Millis{0};
                st().last_read = LastRead{e.uid, Millis{0}};
            } else {
                detect(e.uid);
            }
        } else if (auto* playback = std::get_if<PlaybackMode>(&mode)) {
            if (playback->uid == e.uid) {
                st().last_read = LastRead{e.uid, Millis{0}};
            } else if (cfg_.playback_preemptible) {
                detect(e.uid);
            } else {
                out_.note = "tag read ignored during non-preemptible playback";
            }
        } else {
            detect(e.uid);
        }
    }

    void on_button() {
        auto& mode = st().mode;
        if (auto* prompt = std::get_if<PromptNewMode>(&mode)) {
            start_recording(TagUid(prompt->uid));
            return;
        }
        if (std::holds_alternative<RecordingMode>(mode)) {
            out_.note = "button ignored while recording";
            return;
        }
        if (!fresh_context()) {
            out_.note = "button pressed with no tag in context";
            return;
        }
        const TagUid uid = st().last_read->uid;
        if (auto* playback = std::get_if<PlaybackMode>(&mode); playback && playback->uid != uid) {
            out_.note = "button context does not match playing tag";
            return;
        }
        if (db_.contains(uid)) {
            replace(uid);
        } else {
            start_recording(uid);
        }
    }

    void on_input(const RecordingInput& e) {
        if (auto* rec = std::get_if<RecordingMode>(&st().mode)) {
            rec->input = e;
        } else {
            out_.note = "recording input ignored outside RECORDING";
        }
    }

    void on_tick(const Tick& e) {
        if (e.dt.count() <= 0) throw std::invalid_argument("tick dt must be > 0");

        auto& last = st().last_read;
        if (last) {
            last->age += e.dt;
            if (last->age >= cfg_.context_timeout) last.reset();
        }

        auto& mode = st().mode;
        if (auto* prompt = std::get_if<PromptNewMode>(&mode)) {
            prompt->age += e.dt;
            if (prompt->age >= cfg_.context_timeout) mode = DetectMode{};
        } else if (auto* playback = std::get_if<PlaybackMode>(&mode)) {
            playback->elapsed += e.dt;
            if (playback->elapsed >= playback->clip.duration) mode = DetectMode{};
        } else if (auto* rec = std::get_if<RecordingMode>(&mode)) {
            rec->elapsed = std::min(rec->elapsed + e.dt, cfg_.record_duration);
            if (rec->elapsed < cfg_.record_duration) return;
            if (!rec->input) {
                out_.note = "recording ended without input";
                mode = DetectMode{};
                return;
            }
            const TagUid uid = rec->uid;
            AudioClip clip =
                make_clip(uid, rec->input->label, rec->input->payload, cfg_.record_duration);
            try {
                db_.bind(uid, clip);
            } catch (const PersistenceError& ex) {
                fail(ex.what());
                return;
            } catch (const std::invalid_argument& ex) {
                fail(ex.what());
                return;
            }
            mode = DetectMode{};
            out_.actions.emplace_back(StoreBinding{uid, std::move(clip)});
        }
    }

    TagDatabase& db_;
    const DeviceConfig& cfg_;
    StepResult out_;
};

}  // namespace

void DeviceConfig::validate() const {
    if (record_duration.count() <= 0) throw std::invalid_argument("record_duration must be > 0");
    if (context_timeout.count() < 0) throw std::invalid_argument("context_timeout must be >= 0");
}

StepResult step(const DeviceState& state, const DeviceEvent& event, TagDatabase& db,
                const DeviceConfig& cfg) {
    return Stepper(state, db, cfg).run(event);
}

std::string_view mode_name(const DeviceState& state) {
    return std::visit(overloaded{
                          [](const DetectMode&) { return std::string_view("DETECT"); },
                          [](const PromptNewMode&) { return std::string_view("PROMPT_NEW"); },
                          [](const RecordingMode&) { return std::string_view("RECORDING"); },
                          [](const PlaybackMode&) { return std::string_view("PLAYBACK"); },
                      },
                      state.mode);
}

std::string_view event_name(const DeviceEvent& event) {
    return std::visit(overloaded{
                          [](const TagRead&) { return std::string_view("TagRead"); },
                          [](const ButtonDown&) { return std::string_view("ButtonDown"); },
                          [](const RecordingInput&) { return std::string_view("RecordingInput"); },
                          [](const Tick&) { return std::string_view("Tick"); },
                      },
                      event);
}

std::string_view action_name(const DeviceAction& action) {
    return std::visit(overloaded{
                          [](const NotifyNewTag&) { return std::string_view("NotifyNewTag"); },
                          [](const StartRecording&) { return std::string_view("StartRecording"); },
                          [](const StoreBinding&) { return std::string_view("StoreBinding"); },
                          [](const PlayClip&) { return std::string_view("PlayClip"); },
                          [](const DeleteBinding&) { return std::string_view("DeleteBinding"); },
                      },
                      action);
}

const TagUid* action_uid(const DeviceAction& action) {
    return std::visit([](const auto& a) { return &a.uid; }, action);
}

DeviceRunner::DeviceRunner(TagDatabase& db, DeviceConfig cfg) : db_(&db), cfg_(cfg) {
    cfg_.validate();
}

const TraceEntry& DeviceRunner::apply(DeviceEvent event) {
    StepResult result = step(state_, event, *db_, cfg_);
    if (const auto* tick = std::get_if<Tick>(&event)) clock_ms_ += tick->dt.count();
    state_ = std::move(result.state);
    trace_.push_back(TraceEntry{clock_ms_, std::move(event), std::move(result.actions),
                                std::move(result.error), std::move(result.note)});
    return trace_.back();
}

ScriptRun run_script(std::span<const DeviceEvent> events, const DeviceConfig& cfg, TagDatabase& db) {
    DeviceRunner runner(db, cfg);
    for (const auto& e : events) runner.apply(e);
    return ScriptRun{runner.trace(), runner.state()};
}

}  // namespace rfglove
