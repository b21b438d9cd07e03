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
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rfglove/rfmodel.hpp"

using namespace rfglove;

namespace {

TagPlacement tag(const char* hex, double x, double y, Material m = Material::Plastic) {
    return TagPlacement{TagUid::from_hex(hex), x, y, m, 18.0};
}

}  // namespace

TEST_SUITE("rfmodel") {

TEST_CASE("head-on read at 2 cm") {
    const std::vector<TagPlacement> tags{tag("04000001", 0, 20)};
    const auto r = scan(HandPose(0, 0, 90), tags);
    REQUIRE(r);
    CHECK(r->distance_mm == doctest::Approx(20.0));
    CHECK(r->offset_deg == doctest::Approx(0.0));
    CHECK(r->latency_ms == doctest::Approx(100.0));
    CHECK(r->gain_dbi == doctest::Approx(5.5));
}

TEST_CASE("range limit is inclusive at 5 cm") {
    const std::vector<TagPlacement> at{tag("04000001", 50, 0)};
    const std::vector<TagPlacement> past{tag("04000001", 50.001, 0)};
    CHECK(scan(HandPose(0, 0, 0), at).has_value());
    CHECK_FALSE(scan(HandPose(0, 0, 0), past).has_value());
}

TEST_CASE("angle limit is 60 degrees either side") {
    const double r = 30.0;
    auto at = [&](double deg) {
        const double rad = deg * std::numbers::pi / 180.0;
        return std::vector<TagPlacement>{tag("04000001", r * std::cos(rad), r * std::sin(rad))};
    };
    CHECK(scan(HandPose(0, 0, 0), at(59.9)).has_value());
    CHECK(scan(HandPose(0, 0, 0), at(-59.9)).has_value());
    CHECK_FALSE(scan(HandPose(0, 0, 0), at(60.1)).has_value());
    CHECK_FALSE(scan(HandPose(0, 0, 0), at(-60.1)).has_value());
    CHECK_FALSE(scan(HandPose(0, 0, 0), at(180)).has_value());
}

TEST_CASE("offset is signed counter-clockwise and latency grows with it") {
    const std::vector<TagPlacement> left{tag("04000001", 20, 20)};
    const auto r = scan(HandPose(0, 0, 0), left);
    REQUIRE(r);
    CHECK(r->offset_deg == doctest::Approx(45.0));
    CHECK(r->latency_ms == doctest::Approx(100.0 * (1.0 + 45.0 / 60.0)));
    CHECK(r->gain_dbi == doctest::Approx(5.5 * 0.5));
    const std::vector<TagPlacement> right{tag("04000001", 20, -20)};
    CHECK(scan(HandPose(0, 0, 0), right)->offset_deg == doctest::Approx(-45.0));
}

TEST_CASE("facing wraps around 360") {
    const std::vector<TagPlacement> tags{tag("04000001", 20, -1)};
    const auto r = scan(HandPose(0, 0, 359), tags);
    REQUIRE(r);
    CHECK(std::fabs(r->offset_deg) < 3.0);
    CHECK(HandPose(0, 0, -90).facing_deg == doctest::Approx(270.0));
    CHECK(HandPose(0, 0, 720).facing_deg == doctest::Approx(0.0));
    CHECK(normalize_deg(-1e-18) < 360.0);
}

TEST_CASE("metal mounts are never read") {
    const std::vector<TagPlacement> tags{tag("04000001", 0, 20, Material::Metal)};
    CHECK_FALSE(scan(HandPose(0, 0, 90), tags).has_value());
}

TEST_CASE("most direct tag wins, then nearest, then smallest uid") {
    const std::vector<TagPlacement> tags{tag("04000002", 30, 10), tag("04000001", 40, 0), tag("04000003", 20, 0)};
    CHECK(scan(HandPose(0, 0, 0), tags)->uid.hex() == "04000003");
    const std::vector<TagPlacement> tie{tag("04000009", 20, 0), tag("04000005", 20, 0)};
    CHECK(scan(HandPose(0, 0, 0), tie)->uid.hex() == "04000005");
}

TEST_CASE("tag under the hand reads with zero offset") {
    const std::vector<TagPlacement> tags{tag("04000001", 5, 5)};
    const auto r = scan(HandPose(5, 5, 123), tags);
    REQUIRE(r);
    CHECK(r->distance_mm == 0.0);
    CHECK(r->offset_deg == 0.0);
}

TEST_CASE("latency profile") {
    const RfParams p;
    const std::vector<double> offs{0.0, 30.0, 60.0};
    const auto lat = scan_latency_profile(p, offs);
    CHECK(lat == std::vector<double>{100.0, 150.0, 200.0});
    const std::vector<double> bad{61.0};
    CHECK_THROWS_AS(scan_latency_profile(p, bad), std::out_of_range);
    const std::vector<double> neg{-1.0};
    CHECK_THROWS_AS(scan_latency_profile(p, neg), std::out_of_range);
}

TEST_CASE("params validation") {
    RfParams p;
    CHECK_NOTHROW(p.validate());
    p.max_half_angle_deg = 91;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.max_range_mm = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("materials round trip through their names") {
    for (auto m : {Material::Plastic, Material::Fabric, Material::Wood, Material::Paper, Material::Metal}) {
        CHECK(parse_material(to_string(m)) == m);
    }
    CHECK_FALSE(parse_material("steel").has_value());
    CHECK_FALSE(parse_material("Plastic").has_value());
}

TEST_CASE("winner matches brute force on random dense scenes") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> pos(-60, 60);
    std::uniform_real_distribution<double> ang(0, 360);
    const RfParams p;
    for (int s = 0; s < 300; ++s) {
        std::vector<TagPlacement> tags;
        for (int i = 0; i < 12; ++i) {
            std::vector<std::uint8_t> b{4, static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(i),
                                        static_cast<std::uint8_t>(rng())};
            tags.push_back({TagUid(b), pos(rng), pos(rng), rng() % 5 == 0 ? Material::Metal : Material::Wood, 18});
        }
        const HandPose pose(0, 0, ang(rng));
        const auto got = scan(pose, tags, p);
        const auto want = oracle::rf_winner(pose, tags, p);
        REQUIRE(got.has_value() == want.has_value());
        if (got) CHECK(got->uid == *want);
    }
}

}  // TEST_SUITE
