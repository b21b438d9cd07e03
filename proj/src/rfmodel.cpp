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
#include "rfglove/rfmodel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace rfglove {
namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

constexpr std::array<std::pair<Material, std::string_view>, 5> kMaterialNames{{
    {Material::Plastic, "plastic"},
    {Material::Fabric, "fabric"},
    {Material::Wood, "wood"},
    {Material::Paper, "paper"},
    {Material::Metal, "metal"},
}};

double latency_at(const RfParams& p, double abs_offset) {
    return p.base_latency_ms * (1.0 + abs_offset / p.max_half_angle_deg);
}

}  // namespace

void RfParams::validate() const {
    if (!(max_range_mm > 0 && max_half_angle_deg > 0 && peak_gain_dbi > 0 && base_latency_ms > 0)) {
        throw std::invalid_argument("rf parameters must all be > 0");
    }
    if (max_half_angle_deg > 90.0) throw std::invalid_argument("max_half_angle_deg must be <= 90");
}

double normalize_deg(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0) r += 360.0;
    // fmod of a tiny negative value can round back up to exactly 360.
    if (r >= 360.0) r = 0.0;
    return r;
}

HandPose::HandPose(double x, double y, double facing)
    : x_mm(x), y_mm(y), facing_deg(normalize_deg(facing)) {}

std::string_view to_string(Material m) {
    for (const auto& [value, name] : kMaterialNames) {
        if (value == m) return name;
    }
    return "unknown";
}

std::optional<Material> parse_material(std::string_view name) {
    for (const auto& [value, text] : kMaterialNames) {
        if (text == name) return value;
    }
    return std::nullopt;
}

Bearing bearing(const HandPose& pose, double x_mm, double y_mm) {
    const double dx = x_mm - pose.x_mm;
    const double dy = y_mm - pose.y_mm;
    const double distance = std::hypot(dx, dy);
    if (distance == 0.0) return {0.0, 0.0};
    double offset = std::atan2(dy, dx) * kDegPerRad - pose.facing_deg;
    offset = normalize_deg(offset);
    if (offset > 180.0) offset -= 360.0;
    return {distance, offset};
}

std::optional<ReadResult> scan(const HandPose& pose, std::span<const TagPlacement> tags,
                               const RfParams& params) {
    const TagPlacement* best = nullptr;
    Bearing best_bearing{};
    auto key = [](const Bearing& b, const TagPlacement& t) {
        return std::make_tuple(std::fabs(b.offset_deg), b.distance_mm, std::cref(t.uid));
    };

    for (const auto& tag : tags) {
        if (tag.mount == Material::Metal) continue;
        const Bearing b = bearing(pose, tag.x_mm, tag.y_mm);
        if (b.distance_mm > params.max_range_mm) continue;
        if (std::fabs(b.offset_deg) > params.max_half_angle_deg) continue;
        if (!best || key(b, tag) < key(best_bearing, *best)) {
            best = &tag;
            best_bearing = b;
        }
    }
    if (!best) return std::nullopt;

    const double abs_offset = std::fabs(best_bearing.offset_deg);
    return ReadResult{best->uid, best_bearing.distance_mm, best_bearing.offset_deg,
                      latency_at(params, abs_offset), params.peak_gain_dbi * (1.0 - abs_offset / 90.0)};
}

std::vector<double> scan_latency_profile(const RfParams& params, std::span<const double> offsets_deg) {
    std::vector<double> out;
    out.reserve(offsets_deg.size());
    for (double off : offsets_deg) {
        if (!(off >= 0.0 && off <= params.max_half_angle_deg)) {
            throw std::out_of_range("offset " + std::to_string(off) + " outside [0, " +
                                    std::to_string(params.max_half_angle_deg) + "]");
        }
        out.push_back(latency_at(params, off));
    }
    return out;
}

}  // namespace rfglove
