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
#include "rfglove/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "rfglove/error.hpp"

namespace rfglove {
namespace {

using json = nlohmann::json;

// Minimum centre-to-centre spacing between any two tags placed by the
// builders. Larger than the read range so an aimed hand never has a
// competing tag on its boresight.
constexpr double kTagSpacingMm = 80.0;
constexpr double kEdgeMarginMm = 60.0;

struct Point {
    double x;
    double y;
};

class Builder {
public:
    explicit Builder(std::uint64_t seed) : rng_(seed) {}

    TagUid next_uid() {
        std::uniform_int_distribution<int> byte(0, 255);
        for (;;) {
            std::array<std::uint8_t, 7> b{};
            b[0] = 0x04;  // NXP manufacturer byte, as on real MIFARE tags
            for (std::size_t i = 1; i < b.size(); ++i) b[i] = static_cast<std::uint8_t>(byte(rng_));
            TagUid uid(b);
            if (used_.insert(uid.hex()).second) return uid;
        }
    }

    Point place(const Rect& area, double spacing) {
        std::uniform_real_distribution<double> ux(area.x_min, area.x_max);
        std::uniform_real_distribution<double> uy(area.y_min, area.y_max);
        for (int attempt = 0; attempt < 100000; ++attempt) {
            // Round to 0.1 mm so scenes stay readable in JSON.
            const Point p{std::round(ux(rng_) * 10.0) / 10.0, std::round(uy(rng_) * 10.0) / 10.0};
            if (std::all_of(taken_.begin(), taken_.end(), [&](const Point& q) {
                    return std::hypot(p.x - q.x, p.y - q.y) >= spacing;
                })) {
                taken_.push_back(p);
                return p;
            }
        }
        throw std::logic_error("scene builder could not place an object");
    }

    void reserve(Point p) { taken_.push_back(p); }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    std::set<std::string> used_;
    std::vector<Point> taken_;
};

Rect table() { return Rect{0.0, 0.0, kTableWidthMm, kTableDepthMm}; }

SceneObject make_object(std::string id, std::string name, std::string shape, std::string color,
                        Material material, Point at, TagUid tag) {
    SceneObject o;
    o.object_id = std::move(id);
    o.name = std::move(name);
    o.shape = std::move(shape);
    o.color = std::move(color);
    o.material = material;
    o.x_mm = at.x;
    o.y_mm = at.y;
    o.tag = std::move(tag);
    return o;
}

Scene setup_objects(std::uint64_t seed) {
    struct Spec {
        const char* name;
        const char* shape;
        const char* color;
        Material material;
    };
    static constexpr std::array<Spec, 8> kObjects{{
        {"plastic cup", "cylinder", "red", Material::Plastic},
        {"pair of socks", "freeform", "grey", Material::Fabric},
        {"wooden block", "cube", "brown", Material::Wood},
        {"notebook", "box", "blue", Material::Paper},
        {"water bottle", "cylinder", "clear", Material::Plastic},
        {"scarf", "freeform", "green", Material::Fabric},
        {"chocolate box", "box", "yellow", Material::Paper},
        {"wooden spoon", "freeform", "beige", Material::Wood},
    }};

    Builder b(seed);
    Scene s;
    s.setup = 1;
    s.seed = seed;
    s.extent = table();
    const Rect area{100.0, 100.0, kTableWidthMm - 100.0, kTableDepthMm - 100.0};
    for (std::size_t i = 0; i < kObjects.size(); ++i) {
        const auto& spec = kObjects[i];
        const Point at = b.place(area, 150.0);
        s.objects.push_back(make_object("obj" + std::to_string(i + 1), spec.name, spec.shape, spec.color,
                                        spec.material, at, b.next_uid()));
    }
    return s;
}

// Setups 2 and 3 share a layout: a box with three holes along the back of
// the table and nine loose disks in front of it.
Scene setup_hole_box(int n, std::uint64_t seed) {
    Builder b(seed);
    Scene s;
    s.setup = n;
    s.seed = seed;
    s.extent = table();

    const std::array<std::string, 3> features =
        n == 2 ? std::array<std::string, 3>{"red", "green", "blue"}
               : std::array<std::string, 3>{"12gon", "14gon", "16gon"};

    constexpr std::array<double, 3> kHoleX{450.0, 600.0, 750.0};
    constexpr double kHoleY = 620.0;
    for (std::size_t h = 0; h < 3; ++h) {
        const Point at{kHoleX[h], kHoleY};
        b.reserve(at);
        const std::string& f = features[h];
        if (n == 2) {
            s.objects.push_back(make_object("hole-" + f, f + " hole", "box-hole", f, Material::Wood, at,
                                            b.next_uid()));
        } else {
            s.objects.push_back(make_object("hole-" + f, f + " hole", "box-hole-" + f, "natural",
                                            Material::Wood, at, b.next_uid()));
        }
    }

    const Rect loose{100.0, 100.0, kTableWidthMm - 100.0, 450.0};
    for (std::size_t h = 0; h < 3; ++h) {
        const std::string& f = features[h];
        for (int k = 1; k <= 3; ++k) {
            const Point at = b.place(loose, kTagSpacingMm);
            const std::string id = "disk-" + f + "-" + std::to_string(k);
            if (n == 2) {
                s.objects.push_back(
                    make_object(id, f + " disk", "disk", f, Material::Plastic, at, b.next_uid()));
            } else {
                s.objects.push_back(make_object(id, f + " disk", "disk-" + f, "natural",
                                                Material::Plastic, at, b.next_uid()));
            }
        }
    }
    return s;
}

Scene setup_regions(std::uint64_t seed) {
    Builder b(seed);
    Scene s;
    s.setup = 4;
    s.seed = seed;
    s.extent = table();

    std::array<int, kRegionCount> ids{};
    std::iota(ids.begin(), ids.end(), 1);
    std::shuffle(ids.begin(), ids.end(), b.rng());

    constexpr int kCols = 4;
    const double w = kTableWidthMm / kCols;
    const double h = kTableDepthMm / 2.0;
    std::uniform_int_distribution<int> disk_count(2, 3);
    constexpr std::array<const char*, 3> kLetters{"A", "B", "C"};

    for (int cell = 0; cell < kRegionCount; ++cell) {
        const int row = cell / kCols;
        const int col = cell % kCols;
        Region r;
        r.region_id = ids[static_cast<std::size_t>(cell)];
        r.bounds = Rect{col * w, row * h, (col + 1) * w, (row + 1) * h};
        r.tag_x_mm = r.bounds.center_x();
        r.tag_y_mm = row == 0 ? 20.0 : kTableDepthMm - 20.0;
        r.tag = b.next_uid();
        b.reserve({r.tag_x_mm, r.tag_y_mm});

        const Rect inner{r.bounds.x_min + kEdgeMarginMm, r.bounds.y_min + kEdgeMarginMm + 20.0,
                         r.bounds.x_max - kEdgeMarginMm, r.bounds.y_max - kEdgeMarginMm - 20.0};
        const int count = disk_count(b.rng());
        for (int d = 0; d < count; ++d) {
            const Point at = b.place(inner, kTagSpacingMm);
            const std::string letter = kLetters[static_cast<std::size_t>(d)];
            s.objects.push_back(make_object("r" + std::to_string(r.region_id) + "-" + letter, letter,
                                            "disk", "white", Material::Plastic, at, b.next_uid()));
        }
        s.regions.push_back(std::move(r));
    }
    return s;
}

// ------------------------------------------------------------------ JSON

std::string at(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path.empty() ? "$" : path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
            throw SchemaError(at(path, key), "unknown field");
        }
    }
}

const json& field(const json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(at(path, key), "missing field");
    return *it;
}

double number(const json& j, const std::string& path, const char* key) {
    const json& v = field(j, path, key);
    if (!v.is_number()) throw SchemaError(at(path, key), "expected a number");
    return v.get<double>();
}

std::string text(const json& j, const std::string& path, const char* key) {
    const json& v = field(j, path, key);
    if (!v.is_string()) throw SchemaError(at(path, key), "expected a string");
    return v.get<std::string>();
}

TagUid uid_field(const json& v, const std::string& path) {
    TagUid uid;
    if (!v.is_string() || !TagUid::try_parse(v.get<std::string>(), uid)) {
        throw SchemaError(path, "expected a tag uid (8 or 14 hex digits)");
    }
    return uid;
}

json rect_to_json(const Rect& r) {
    return json{{"x_min", r.x_min}, {"y_min", r.y_min}, {"x_max", r.x_max}, {"y_max", r.y_max}};
}

Rect rect_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"x_min", "y_min", "x_max", "y_max"});
    Rect r{number(j, path, "x_min"), number(j, path, "y_min"), number(j, path, "x_max"),
           number(j, path, "y_max")};
    if (!(r.x_min < r.x_max && r.y_min < r.y_max)) throw SchemaError(path, "empty rectangle");
    return r;
}

}  // namespace

void Scene::validate() const {
    if (!(extent.x_min < extent.x_max && extent.y_min < extent.y_max)) {
        throw SchemaError("extent", "empty rectangle");
    }
    std::set<std::string> ids;
    std::set<TagUid> tags;
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const auto& o = objects[i];
        const std::string path = idx("objects", i);
        if (o.object_id.empty()) throw SchemaError(path + ".id", "empty object id");
        if (!ids.insert(o.object_id).second) {
            throw SchemaError(path + ".id", "duplicate object id '" + o.object_id + "'");
        }
        if (!extent.contains(o.x_mm, o.y_mm)) throw SchemaError(path, "position outside extent");
        if (!(o.tag_diameter_mm > 0)) throw SchemaError(path + ".tag_diameter_mm", "must be > 0");
        if (o.tag && !tags.insert(*o.tag).second) {
            throw SchemaError(path + ".tag", "duplicate tag uid " + o.tag->hex());
        }
    }
    std::set<int> region_ids;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto& r = regions[i];
        const std::string path = idx("regions", i);
        if (r.region_id < 1 || r.region_id > kRegionCount) {
            throw SchemaError(path + ".id", "region id must be in 1..8");
        }
        if (!region_ids.insert(r.region_id).second) {
            throw SchemaError(path + ".id", "duplicate region id " + std::to_string(r.region_id));
        }
        if (!extent.contains(r.bounds.x_min, r.bounds.y_min) ||
            !extent.contains(r.bounds.x_max, r.bounds.y_max)) {
            throw SchemaError(path + ".bounds", "region outside extent");
        }
        if (!extent.contains(r.tag_x_mm, r.tag_y_mm)) throw SchemaError(path, "tag outside extent");
        if (!tags.insert(r.tag).second) {
            throw SchemaError(path + ".tag", "duplicate tag uid " + r.tag.hex());
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (regions[j].bounds.overlaps(r.bounds)) {
                throw SchemaError(path + ".bounds", "overlaps " + idx("regions", j));
            }
        }
    }
}

std::vector<TagPlacement> Scene::tag_placements() const {
    std::vector<TagPlacement> out;
    for (const auto& o : objects) {
        if (o.tag) out.push_back(TagPlacement{*o.tag, o.x_mm, o.y_mm, o.material, o.tag_diameter_mm});
    }
    for (const auto& r : regions) {
        out.push_back(TagPlacement{r.tag, r.tag_x_mm, r.tag_y_mm, Material::Wood, 18.0});
    }
    return out;
}

const SceneObject* Scene::find_object(const std::string& object_id) const {
    auto it = std::find_if(objects.begin(), objects.end(),
                           [&](const SceneObject& o) { return o.object_id == object_id; });
    return it == objects.end() ? nullptr : &*it;
}

const SceneObject* Scene::object_with_tag(const TagUid& uid) const {
    auto it = std::find_if(objects.begin(), objects.end(),
                           [&](const SceneObject& o) { return o.tag && *o.tag == uid; });
    return it == objects.end() ? nullptr : &*it;
}

const Region* Scene::region_with_tag(const TagUid& uid) const {
    auto it = std::find_if(regions.begin(), regions.end(), [&](const Region& r) { return r.tag == uid; });
    return it == regions.end() ? nullptr : &*it;
}

const Region* Scene::find_region(int region_id) const {
    auto it = std::find_if(regions.begin(), regions.end(),
                           [&](const Region& r) { return r.region_id == region_id; });
    return it == regions.end() ? nullptr : &*it;
}

Scene build_setup(int n, std::uint64_t seed) {
    Scene s;
    switch (n) {
        case 1: s = setup_objects(seed); break;
        case 2:
        case 3: s = setup_hole_box(n, seed); break;
        case 4: s = setup_regions(seed); break;
        default: throw std::out_of_range("setup must be 1..4, got " + std::to_string(n));
    }
    s.validate();
    return s;
}

nlohmann::json scene_to_json(const Scene& scene) {
    json objects = json::array();
    for (const auto& o : scene.objects) {
        objects.push_back(json{{"id", o.object_id},
                               {"name", o.name},
                               {"shape", o.shape},
                               {"color", o.color},
                               {"material", std::string(to_string(o.material))},
                               {"x_mm", o.x_mm},
                               {"y_mm", o.y_mm},
                               {"tag", o.tag ? json(o.tag->hex()) : json(nullptr)},
                               {"tag_diameter_mm", o.tag_diameter_mm}});
    }
    json regions = json::array();
    for (const auto& r : scene.regions) {
        regions.push_back(json{{"id", r.region_id},
                               {"bounds", rect_to_json(r.bounds)},
                               {"tag", r.tag.hex()},
                               {"tag_x_mm", r.tag_x_mm},
                               {"tag_y_mm", r.tag_y_mm}});
    }
    return json{{"setup", scene.setup},
                {"seed", scene.seed},
                {"extent", rect_to_json(scene.extent)},
                {"objects", std::move(objects)},
                {"regions", std::move(regions)}};
}

Scene scene_from_json(const nlohmann::json& doc) {
    require_object(doc, "");
    reject_unknown(doc, "", {"setup", "seed", "extent", "objects", "regions"});

    Scene s;
    if (auto it = doc.find("setup"); it != doc.end()) {
        if (!it->is_number_integer()) throw SchemaError("setup", "expected an integer");
        s.setup = it->get<int>();
        if (s.setup < 0 || s.setup > 4) throw SchemaError("setup", "must be 0..4");
    }
    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_unsigned()) throw SchemaError("seed", "expected a non-negative integer");
        s.seed = it->get<std::uint64_t>();
    }
    s.extent = rect_from_json(field(doc, "", "extent"), "extent");

    const json& objects = field(doc, "", "objects");
    if (!objects.is_array()) throw SchemaError("objects", "expected an array");
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const json& j = objects[i];
        const std::string path = idx("objects", i);
        require_object(j, path);
        reject_unknown(j, path,
                       {"id", "name", "shape", "color", "material", "x_mm", "y_mm", "tag", "tag_diameter_mm"});
        SceneObject o;
        o.object_id = text(j, path, "id");
        o.name = text(j, path, "name");
        o.shape = text(j, path, "shape");
        o.color = text(j, path, "color");
        const std::string material = text(j, path, "material");
        const auto parsed = parse_material(material);
        if (!parsed) throw SchemaError(path + ".material", "unknown material '" + material + "'");
        o.material = *parsed;
        o.x_mm = number(j, path, "x_mm");
        o.y_mm = number(j, path, "y_mm");
        if (auto it = j.find("tag"); it != j.end() && !it->is_null()) o.tag = uid_field(*it, path + ".tag");
        if (j.contains("tag_diameter_mm")) o.tag_diameter_mm = number(j, path, "tag_diameter_mm");
        s.objects.push_back(std::move(o));
    }

    if (auto it = doc.find("regions"); it != doc.end()) {
        if (!it->is_array()) throw SchemaError("regions", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& j = (*it)[i];
            const std::string path = idx("regions", i);
            require_object(j, path);
            reject_unknown(j, path, {"id", "bounds", "tag", "tag_x_mm", "tag_y_mm"});
            Region r;
            const json& id = field(j, path, "id");
            if (!id.is_number_integer()) throw SchemaError(path + ".id", "expected an integer");
            r.region_id = id.get<int>();
            r.bounds = rect_from_json(field(j, path, "bounds"), path + ".bounds");
            r.tag = uid_field(field(j, path, "tag"), path + ".tag");
            r.tag_x_mm = number(j, path, "tag_x_mm");
            r.tag_y_mm = number(j, path, "tag_y_mm");
            s.regions.push_back(std::move(r));
        }
    }

    s.validate();
    return s;
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PersistenceError("cannot write " + path.string());
    out << scene_to_json(scene).dump(2) << '\n';
    if (!out) throw PersistenceError("write failed: " + path.string());
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PersistenceError("cannot read " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
    return scene_from_json(doc);
}

}  // namespace rfglove
