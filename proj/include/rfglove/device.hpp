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

// The glove's control loop: detect a tag, notify if it is unknown, record a
// clip on button press, bind it, and play clips back for known tags.
//
// Transition summary (u = tag in context, v = newly read tag):
//   DETECT      + TagRead(v)        -> PLAYBACK(v) + PlayClip if bound,
//                                      PROMPT_NEW(v) + NotifyNewTag otherwise
//   PROMPT_NEW  + ButtonDown        -> RECORDING(u) + StartRecording
//   PROMPT_NEW  + TagRead(u)        -> age refreshed, no action
//   PLAYBACK    + ButtonDown        -> DeleteBinding(u), StartRecording(u)
//   DETECT      + ButtonDown        -> same replace flow if last_read is fresh
//                                      and bound; StartRecording if fresh
//                                      and unbound; no-op otherwise
//   PLAYBACK(u) + TagRead(v != u)   -> DETECT rules for v when preemptible
//   RECORDING   + RecordingInput    -> input held (latest wins)
//   RECORDING   + Tick reaching end -> StoreBinding if input held, DETECT
//   RECORDING   + TagRead/ButtonDown-> ignored
//   Tick ages PROMPT_NEW, PLAYBACK and last_read; contexts expire once
//   age >= context_timeout.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rfglove/tag_uid.hpp"
#include "rfglove/tagdb.hpp"

namespace rfglove {

using Millis = std::chrono::milliseconds;

struct DeviceConfig {
    Millis record_duration{3000};
    Millis context_timeout{10000};
    bool playback_preemptible = true;

    /// Throws std::invalid_argument when record_duration <= 0 or
    /// context_timeout < 0.
    void validate() const;
    bool operator==(const DeviceConfig&) const = default;
};

// ---------------------------------------------------------------- events

struct TagRead {
    TagUid uid;
    double latency_ms = 0.0;
    bool operator==(const TagRead&) const = default;
};
struct ButtonDown {
    bool operator==(const ButtonDown&) const = default;
};
struct RecordingInput {
    std::string label;
    std::string payload;
    bool operator==(const RecordingInput&) const = default;
};
struct Tick {
    Millis dt{0};
    bool operator==(const Tick&) const = default;
};

using DeviceEvent = std::variant<TagRead, ButtonDown, RecordingInput, Tick>;

// --------------------------------------------------------------- actions

struct NotifyNewTag {
    TagUid uid;
    bool operator==(const NotifyNewTag&) const = default;
};
struct StartRecording {
    TagUid uid;
    bool operator==(const StartRecording&) const = default;
};
struct StoreBinding {
    TagUid uid;
    AudioClip clip;
    bool operator==(const StoreBinding&) const = default;
};
struct PlayClip {
    TagUid uid;
    AudioClip clip;
    bool operator==(const PlayClip&) const = default;
};
struct DeleteBinding {
    TagUid uid;
    bool operator==(const DeleteBinding&) const = default;
};

using DeviceAction = std::variant<NotifyNewTag, StartRecording, StoreBinding, PlayClip, DeleteBinding>;

// ----------------------------------------------------------------- state

struct DetectMode {
    bool operator==(const DetectMode&) const = default;
};
struct PromptNewMode {
    TagUid uid;
    Millis age{0};
    bool operator==(const PromptNewMode&) const = default;
};
struct RecordingMode {
    TagUid uid;
    Millis elapsed{0};
    std::optional<RecordingInput> input;
    bool operator==(const RecordingMode&) const = default;
};
struct PlaybackMode {
    TagUid uid;
    AudioClip clip;
    Millis elapsed{0};
    bool operator==(const PlaybackMode&) const = default;
};

struct LastRead {
    TagUid uid;
    Millis age{0};
    bool operator==(const LastRead&) const = default;
};

struct DeviceState {
    std::variant<DetectMode, PromptNewMode, RecordingMode, PlaybackMode> mode;
    std::optional<LastRead> last_read;

    bool is_detect() const { return std::holds_alternative<DetectMode>(mode); }
    bool operator==(const DeviceState&) const = default;
};

struct StepResult {
    DeviceState state;
    std::vector<DeviceAction> actions;
    std::optional<std::string> error;  // db failure; state fell back to DETECT
    std::optional<std::string> note;   // event ignored, with reason
};

/// One transition. Deterministic in (state, event, db contents, cfg); the
/// only side effects are the StoreBinding/DeleteBinding mutations of `db`.
/// Throws std::invalid_argument for a Tick with dt <= 0.
StepResult step(const DeviceState& state, const DeviceEvent& event, TagDatabase& db,
                const DeviceConfig& cfg);

std::string_view mode_name(const DeviceState& state);
std::string_view event_name(const DeviceEvent& event);
std::string_view action_name(const DeviceAction& action);
const TagUid* action_uid(const DeviceAction& action);

// ----------------------------------------------------------- replay

struct TraceEntry {
    std::int64_t t_ms = 0;  // logical clock after the event was applied
    DeviceEvent event;
    std::vector<DeviceAction> actions;
    std::optional<std::string> error;
    std::optional<std::string> note;
};

/// Owns the device state and a logical clock, feeding events into step()
/// against a caller-owned database and recording every transition.
class DeviceRunner {
public:
    explicit DeviceRunner(TagDatabase& db, DeviceConfig cfg = {});

    const TraceEntry& apply(DeviceEvent event);

    const DeviceState& state() const noexcept { return state_; }
    const DeviceConfig& config() const noexcept { return cfg_; }
    std::int64_t clock_ms() const noexcept { return clock_ms_; }
    const std::vector<TraceEntry>& trace() const noexcept { return trace_; }
    TagDatabase& db() noexcept { return *db_; }
    const TagDatabase& db() const noexcept { return *db_; }

private:
    TagDatabase* db_;
    DeviceConfig cfg_;
    DeviceState state_;
    std::int64_t clock_ms_ = 0;
    std::vector<TraceEntry> trace_;
};

struct ScriptRun {
    std::vector<TraceEntry> trace;
    DeviceState final_state;
};

/// Replays `events` from DETECT. Identical inputs give identical traces.
ScriptRun run_script(std::span<const DeviceEvent> events, const DeviceConfig& cfg, TagDatabase& db);

}  // namespace rfglove
