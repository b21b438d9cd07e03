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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rfglove/rfmodel.hpp"
#include "rfglove/tag_uid.hpp"

namespace rfglove {

struct Rect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    bool contains(double x, double y) const {
        return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
    }
    /// True when the interiors intersect; shared edges do not count.
    bool overlaps(const Rect& o) const {
        return x_min < o.x_max && o.x_min < x_max && y_min < o.y_max && o.y_min < y_max;
    }
    double center_x() const { return 0.5 * (x_min + x_max); }
    double center_y() const { return 0.5 * (y_min + y_max); }
    bool operator==(const Rect&) const = default;
};

struct SceneObject {
    std::string object_id;
    std::string name;
    std::string shape;  // e.g. "disk", "disk-12gon", "box-hole", "freeform"
    std::string color;
    Material material = Material::Plastic;
    double x_mm = 0.0;
    double y_mm = 0.0;
    std::optional<TagUid> tag;
    double tag_diameter_mm = 18.0;

    bool operator==(const SceneObject&) const = default;
};

struct Region {
    int region_id = 0;  // 1..8
    Rect bounds;
    TagUid tag;
    double tag_x_mm = 0.0;  // region tags sit on the table edge
    double tag_y_mm = 0.0;

    bool operator==(const Region&) const = default;
};

struct Scene {
    int setup = 0;  // 1..4 for the canonical builders, 0 for hand-written scenes
    std::uint64_t seed = 0;
    Rect extent;
    std::vector<SceneObject> objects;
    std::vector<Region> regions;

    /// Throws SchemaError (path + reason) on the first broken invariant:
    /// unique object ids, unique tags across objects and regions, all
    /// positions inside the extent, non-overlapping regions.
    void validate() const;

    /// Every tag in the scene, objects first, in declaration order.
    std::vector<TagPlacement> tag_placements() const;

    const SceneObject* find_object(const std::string& object_id) const;
    const SceneObject* object_with_tag(const TagUid& uid) const;
    const Region* region_with_tag(const TagUid& uid) const;
    const Region* find_region(int region_id) const;

    bool operator==(const Scene&) const = default;
};

// Fixed table geometry shared by all builders (millimetres).
inline constexpr double kTableWidthMm = 1200.0;
inline constexpr double kTableDepthMm = 800.0;
inline constexpr int kRegionCount = 8;

/// Canonical scene for setup n in 1..4. Random placements are a pure
/// function of seed. Throws std::out_of_range for other n.
Scene build_setup(int n, std::uint64_t seed);

nlohmann::json scene_to_json(const Scene& scene);
/// Throws SchemaError naming the offending field.
Scene scene_from_json(const nlohmann::json& doc);

void save_scene(const Scene& scene, const std::filesystem::path& path);
/// Throws SchemaError for schema violations, PersistenceError for IO.
Scene load_scene(const std::filesystem::path& path);

}  // namespace rfglove
