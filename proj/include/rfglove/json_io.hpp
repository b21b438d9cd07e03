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

// JSON forms shared by the CLI outputs and the session service.
//
//   event   {"type":"TagRead","uid":"04a1..","latency_ms":110.5}
//           {"type":"ButtonDown"}
//           {"type":"RecordingInput","label":"red shirt","payload_bytes":12}
//           {"type":"Tick","dt_ms":500}
//   action  {"type":"PlayClip","uid":"..","clip":{"clip_id":"..","duration_ms":3000,"label":".."}}
//           NotifyNewTag / StartRecording / DeleteBinding carry only "uid";
//           StoreBinding carries "uid" and "clip".
//   state   {"mode":"PLAYBACK","uid":"..","elapsed_ms":200,"clip":{..},
//            "last_read":{"uid":"..","age_ms":200}|null}
//   trace   {"t_ms":1200,"event":{..},"actions":[..],"error":"..","note":".."}
//           ("error" and "note" only when present)
//
// Payload bytes are never serialised; only their length is.

#include <string>
#include <vector>

#include "json.hpp"

#include "rfglove/agent.hpp"
#include "rfglove/device.hpp"
#include "rfglove/rfmodel.hpp"
#include "rfglove/tagdb.hpp"

namespace rfglove {

nlohmann::json to_json(const AudioClip& clip);
nlohmann::json to_json(const DeviceEvent& event);
nlohmann::json to_json(const DeviceAction& action);
nlohmann::json to_json(const DeviceState& state);
nlohmann::json to_json(const TraceEntry& entry);
nlohmann::json to_json(const ReadResult& read);
nlohmann::json to_json(const HandPose& pose);

/// Per-participant summary without the event trace.
nlohmann::json summary_json(const TrialTranscript& t);

/// One line per trace entry, each a compact JSON object.
std::string trace_jsonl(const std::vector<TraceEntry>& trace);

/// Rounds to 6 decimals; reports use it to keep numbers readable.
double round6(double v);

}  // namespace rfglove
