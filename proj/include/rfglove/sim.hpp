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

// Line-oriented driver scripts for the device, run against a scene.
//
//   # comment
//   bind <uid> <label...>      pre-load a binding (only before other commands)
//   pose <x_mm> <y_mm> <deg>   move the hand; a hit costs its read latency,
//                              then the device sees the TagRead
//   tag <uid> [latency_ms]     force a read of <uid>
//   button
//   record <label...>          recording input (voice stand-in)
//   tick <ms>
//
// Output is one JSON document holding the trace, every scan and the final
// state and bindings. Identical inputs give identical bytes.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "rfglove/device.hpp"
#include "rfglove/rfmodel.hpp"
#include "rfglove/scene.hpp"
#include "rfglove/tagdb.hpp"

namespace rfglove {

struct ScriptBind {
    TagUid uid;
    std::string label;
};
struct ScriptPose {
    HandPose pose;
};
struct ScriptTag {
    TagUid uid;
    double latency_ms = 0.0;
};
struct ScriptButton {};
struct ScriptRecord {
    std::string label;
};
struct ScriptTick {
    Millis dt{0};
};

using ScriptCommand = std::variant<ScriptBind, ScriptPose, ScriptTag, ScriptButton, ScriptRecord, ScriptTick>;

struct ScriptLine {
    std::size_t line = 0;  // 1-based
    ScriptCommand command;
};

/// Throws ParseError citing the 1-based line of the first bad command.
std::vector<ScriptLine> parse_script(std::string_view text);

/// Runs a parsed script. `db` receives the bindings (and writes through if
/// it has a store).
nlohmann::json run_sim(const Scene& scene, const std::vector<ScriptLine>& script, TagDatabase& db,
                       const DeviceConfig& cfg = {}, const RfParams& rf = {});

/// Clock advance for a read with the given latency: ceil, at least 1 ms.
Millis latency_tick(double latency_ms);

}  // namespace rfglove
