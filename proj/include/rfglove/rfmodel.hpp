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

// Planar read model of the palm-side 13.56 MHz reader.
//
// A tag is a candidate when it is not metal-mounted, its centre lies within
// max_range_mm of the hand, and its bearing is within +/-max_half_angle_deg
// of the boresight. Among candidates the reader answers for the one with
// the smallest |offset|, then the smallest distance, then the smallest uid.
//
//   latency = base_latency_ms * (1 + |offset| / max_half_angle_deg)
//   gain    = peak_gain_dbi   * (1 - |offset| / 90)

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rfglove/tag_uid.hpp"

namespace rfglove {

struct RfParams {
    double max_range_mm = 50.0;
    double max_half_angle_deg = 60.0;
    double peak_gain_dbi = 5.5;
    double base_latency_ms = 100.0;

    /// Throws std::invalid_argument unless all fields are > 0 and the half
    /// angle is <= 90.
    void validate() const;
};

struct HandPose {
    double x_mm = 0.0;
    double y_mm = 0.0;
    double facing_deg = 0.0;  // counter-clockwise from +x, kept in [0, 360)

    HandPose() = default;
    HandPose(double x, double y, double facing);
};

/// Wraps any angle into [0, 360).
double normalize_deg(double deg);

enum class Material { Plastic, Fabric, Wood, Paper, Metal };

std::string_view to_string(Material m);
/// Accepts lowercase names ("plastic", ...). Returns nullopt otherwise.
std::optional<Material> parse_material(std::string_view name);

struct TagPlacement {
    TagUid uid;
    double x_mm = 0.0;
    double y_mm = 0.0;
    Material mount = Material::Plastic;
    double diameter_mm = 18.0;
};

struct ReadResult {
    TagUid uid;
    double distance_mm = 0.0;
    double offset_deg = 0.0;  // signed, counter-clockwise positive
    double latency_ms = 0.0;
    double gain_dbi = 0.0;

    bool operator==(const ReadResult&) const = default;
};

/// Geometry of one tag relative to the hand, without any range test.
struct Bearing {
    double distance_mm;
    double offset_deg;  // signed, in (-180, 180]
};
Bearing bearing(const HandPose& pose, double x_mm, double y_mm);

std::optional<ReadResult> scan(const HandPose& pose, std::span<const TagPlacement> tags,
                               const RfParams& params = {});

/// Latency at each offset. Throws std::out_of_range for an offset outside
/// [0, max_half_angle_deg].
std::vector<double> scan_latency_profile(const RfParams& params, std::span<const double> offsets_deg);

}  // namespace rfglove
