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
#include <string>

#include "doctest.h"
#include "rfglove/error.hpp"
#include "rfglove/scene.hpp"
#include "rfglove/sim.hpp"
#include "support.hpp"

using namespace rfglove;

namespace {

std::vector<std::string> action_types(const nlohmann::json& doc) {
    std::vector<std::string> out;
    for (const auto& e : doc.at("trace")) {
        for (const auto& a : e.at("actions")) out.push_back(a.at("type").get<std::string>());
    }
    return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::string aim_at(const SceneObject& o) {
    return "pose " + std::to_string(o.x_mm) + " " + std::to_string(o.y_mm - 20.0) + " 90\n";
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("parse commands") {
    const auto lines = parse_script("# header\nbind 04a1b2c3 red shirt\n\npose 10 20.5 90\ntag 04a1b2c3 120\n"
                                    "button\nrecord blue  mug\ntick 250 # trailing\n");
    REQUIRE(lines.size() == 6);
    CHECK(lines[0].line == 2);
    CHECK(std::get<ScriptBind>(lines[0].command).label == "red shirt");
    CHECK(std::get<ScriptPose>(lines[1].command).pose.y_mm == doctest::Approx(20.5));
    CHECK(std::get<ScriptTag>(lines[2].command).latency_ms == doctest::Approx(120.0));
    CHECK(std::holds_alternative<ScriptButton>(lines[3].command));
    CHECK(std::get<ScriptRecord>(lines[4].command).label == "blue  mug");
    CHECK(std::get<ScriptTick>(lines[5].command).dt.count() == 250);
    CHECK(lines[5].line == 8);
}

TEST_CASE("parse errors cite the line") {
    const char* bad[] = {"tick 0\n", "tick 1.5\n", "pose 1 2\n", "tag zz\n", "frobnicate\n", "record\n",
                         "button now\n", "bind 04a1b2c3\n"};
    for (const char* text : bad) {
        const std::string script = std::string("button\n# fine\n") + text;
        try {
            parse_script(script);
            FAIL("accepted: " << text);
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).rfind("line 3: ", 0) == 0);
        }
    }
    try {
        parse_script("button\nbind 04a1b2c3 late\n");
        FAIL("late bind accepted");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("latency tick") {
    CHECK(latency_tick(100.0).count() == 100);
    CHECK(latency_tick(100.2).count() == 101);
    CHECK(latency_tick(0.0).count() == 1);
}

TEST_CASE("known tag plays its clip") {
    const auto scene = build_setup(1, 1);
    const auto& obj = scene.objects.front();
    const auto script = parse_script("bind " + obj.tag->hex() + " red cup\n" + aim_at(obj) + "tick 500\n");
    TagDatabase db;
    const auto doc = run_sim(scene, script, db);
    CHECK(contains(action_types(doc), "PlayClip"));
    CHECK(doc.at("scans").size() == 1);
    CHECK(doc.at("scans")[0].at("read").at("uid") == obj.tag->hex());
    CHECK(doc.at("final_state").at("mode") == "PLAYBACK");
    CHECK(doc.at("clock_ms") == 600);
}

TEST_CASE("unknown tag is learnt then recognised") {
    const auto scene = build_setup(1, 1);
    const auto& obj = scene.objects.at(1);
    const auto text = aim_at(obj) + "button\nrecord pair of socks\ntick 3000\n" + aim_at(obj);
    TagDatabase db;
    const auto doc = run_sim(scene, parse_script(text), db);
    const auto types = action_types(doc);
    REQUIRE(types.size() == 4);
    CHECK(types[0] == "NotifyNewTag");
    CHECK(types[1] == "StartRecording");
    CHECK(types[2] == "StoreBinding");
    CHECK(types[3] == "PlayClip");
    REQUIRE(db.find(*obj.tag));
    CHECK(db.find(*obj.tag)->label == "pair of socks");
    CHECK(doc.at("bindings").size() == 1);
}

TEST_CASE("pose over nothing") {
    const auto scene = build_setup(1, 1);
    TagDatabase db;
    const auto doc = run_sim(scene, parse_script("pose 5 5 270\nbutton\n"), db);
    CHECK(doc.at("scans")[0].at("read").is_null());
    CHECK(action_types(doc).empty());
    CHECK(doc.at("final_state").at("mode") == "DETECT");
}

TEST_CASE("identical inputs give identical bytes") {
    const auto scene = build_setup(1, 4);
    std::string text = "bind " + scene.objects[2].tag->hex() + " keys\n";
    for (const auto& o : scene.objects) text += aim_at(o) + "tick 900\nbutton\nrecord thing\ntick 3100\n";
    const auto script = parse_script(text);
    TagDatabase a;
    TagDatabase b;
    CHECK(run_sim(scene, script, a).dump() == run_sim(scene, script, b).dump());
}

TEST_CASE("bindings persist through a store") {
    testing::TempDir dir;
    const auto scene = build_setup(1, 1);
    const auto& obj = scene.objects.front();
    {
        auto db = TagDatabase::open(dir.path());
        run_sim(scene, parse_script("bind " + obj.tag->hex() + " cup\n"), db);
    }
    CHECK(TagDatabase::load(dir.path()).find(*obj.tag)->label == "cup");
}

}
