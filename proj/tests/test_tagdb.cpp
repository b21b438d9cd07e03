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
#include <algorithm>
#include <array>
#include <map>
#include <random>

#include "doctest.h"
#include "rfglove/error.hpp"
#include "rfglove/tagdb.hpp"
#include "support.hpp"

using namespace rfglove;
using rfglove::testing::TempDir;
namespace fs = std::filesystem;

namespace {

const TagUid kA = TagUid::from_hex("04a1b2c3");
const TagUid kB = TagUid::from_hex("04a1b2c3d4e5f6");
const TagUid kC = TagUid::from_hex("88112233");

AudioClip clip_for(const TagUid& uid, const std::string& label, std::chrono::milliseconds d = std::chrono::milliseconds{3000}) {
    return make_clip(uid, label, "pcm:" + label, d);
}

}  // namespace

TEST_SUITE("tagdb") {

TEST_CASE("tag uid parsing and text form") {
    CHECK(kA.hex() == "04a1b2c3");
    CHECK(TagUid::from_hex("04A1B2C3") == kA);
    CHECK(kB.bytes().size() == 7);
    CHECK_THROWS_AS(TagUid::from_hex("04a1b2"), std::invalid_argument);
    CHECK_THROWS_AS(TagUid::from_hex("04a1b2c3d4"), std::invalid_argument);
    CHECK_THROWS_AS(TagUid::from_hex("04a1b2cg"), std::invalid_argument);
    TagUid out;
    CHECK_FALSE(TagUid::try_parse("", out));
    CHECK(TagUid::try_parse("0a0b0c0d", out));
    CHECK(out.hex() == "0a0b0c0d");
    const std::array<std::uint8_t, 5> five{1, 2, 3, 4, 5};
    CHECK_THROWS_AS(TagUid{std::span<const std::uint8_t>(five)}, std::invalid_argument);
}

TEST_CASE("uid ordering matches hex ordering") {
    std::mt19937_64 rng(11);
    std::vector<TagUid> uids;
    for (int i = 0; i < 200; ++i) {
        std::vector<std::uint8_t> b(rng() % 2 ? 4 : 7);
        for (auto& x : b) x = static_cast<std::uint8_t>(rng());
        uids.emplace_back(b);
    }
    for (std::size_t i = 0; i + 1 < uids.size(); ++i) {
        CHECK((uids[i] < uids[i + 1]) == (uids[i].hex() < uids[i + 1].hex()));
    }
}

TEST_CASE("clip id is the FNV-1a hash of uid, label and payload") {
    CHECK(make_clip_id(kA, "red shirt", "pcm:red shirt") == "aec47a72ddc05d47");
    CHECK(make_clip_id(kA, "x", "") != make_clip_id(kB, "x", ""));
    CHECK(make_clip_id(kA, "ab", "c") != make_clip_id(kA, "a", "bc"));
    CHECK(is_valid_clip_id("0123456789abcdef"));
    CHECK_FALSE(is_valid_clip_id("0123456789ABCDEF"));
    CHECK_FALSE(is_valid_clip_id("0123"));
}

TEST_CASE("lookup, bind, replace and remove in memory") {
    TagDatabase db;
    CHECK_FALSE(db.lookup(kA).has_value());

    const AudioClip x = clip_for(kA, "cup");
    db.bind(kA, x);
    CHECK(db.lookup(kA) == x);

    const AudioClip y = clip_for(kA, "mug");
    db.bind(kA, y);
    CHECK(db.lookup(kA) == y);
    CHECK(db.size() == 1);

    db.remove(kA);
    CHECK_FALSE(db.contains(kA));
    db.remove(kA);
    CHECK(db.empty());
}

TEST_CASE("bind rejects bad clips and leaves the database unchanged") {
    TagDatabase db;
    db.bind(kA, clip_for(kA, "cup"));
    const auto before = db.bindings();

    CHECK_THROWS_AS(db.bind(kB, clip_for(kB, "zero", std::chrono::milliseconds{0})), std::invalid_argument);
    CHECK_THROWS_AS(db.bind(kB, clip_for(kB, "tab\there")), std::invalid_argument);
    CHECK_THROWS_AS(db.bind(kB, clip_for(kB, "line\nbreak")), std::invalid_argument);
    AudioClip bad = clip_for(kB, "bad");
    bad.clip_id = "xyz";
    CHECK_THROWS_AS(db.bind(kB, bad), std::invalid_argument);
    // Same clip id under a second uid.
    CHECK_THROWS_AS(db.bind(kB, *db.lookup(kA)), std::invalid_argument);
    CHECK_THROWS_AS(db.bind(TagUid(), clip_for(kB, "x")), std::invalid_argument);
    CHECK(db.bindings() == before);
}

TEST_CASE("double bind leaves exactly one payload on disk") {
    TempDir tmp;
    auto db = TagDatabase::open(tmp.path());
    db.bind(kA, clip_for(kA, "first"));
    db.bind(kA, clip_for(kA, "second"));
    const auto files = rfglove::testing::payload_files(tmp.path());
    REQUIRE(files.size() == 1);
    CHECK(*files.begin() == db.lookup(kA)->clip_id);
    CHECK(rfglove::testing::slurp(tmp / (db.lookup(kA)->clip_id + ".bin")) == "pcm:second");
}

TEST_CASE("rebinding an identical clip keeps its payload") {
    TempDir tmp;
    auto db = TagDatabase::open(tmp.path());
    db.bind(kA, clip_for(kA, "same"));
    db.bind(kA, clip_for(kA, "same"));
    CHECK(rfglove::testing::payload_files(tmp.path()).size() == 1);
    CHECK(TagDatabase::load(tmp.path()) == db);
}

TEST_CASE("bind then remove leaves no payloads") {
    TempDir tmp;
    auto db = TagDatabase::open(tmp.path());
    db.bind(kA, clip_for(kA, "x"));
    db.remove(kA);
    CHECK(rfglove::testing::payload_files(tmp.path()).empty());
    CHECK(rfglove::testing::slurp(tmp / "index.tsv").empty());
}

TEST_CASE("index format and round trip") {
    TempDir tmp;
    auto db = TagDatabase::open(tmp.path());
    db.bind(kC, clip_for(kC, "wooden spoon"));
    db.bind(kA, clip_for(kA, "plastic cup"));
    db.bind(kB, clip_for(kB, "pair of socks"));

    const std::string index = rfglove::testing::slurp(tmp / "index.tsv");
    const std::string expected = "04a1b2c3\t" + db.lookup(kA)->clip_id + "\t3000\tplastic cup\n" +
                                 "04a1b2c3d4e5f6\t" + db.lookup(kB)->clip_id + "\t3000\tpair of socks\n" +
                                 "88112233\t" + db.lookup(kC)->clip_id + "\t3000\twooden spoon\n";
    CHECK(index == expected);
    CHECK(db.index_text() == expected);

    const auto loaded = TagDatabase::load(tmp.path());
    CHECK(loaded == db);
    TempDir other;
    loaded.persist(other.path());
    CHECK(rfglove::testing::slurp(other / "index.tsv") == index);
    CHECK(loaded.lookup(kB)->payload == "pcm:pair of socks");
}

TEST_CASE("index order does not depend on bind order") {
    std::vector<std::pair<TagUid, std::string>> items{{kA, "a"}, {kB, "b"}, {kC, "c"}};
    std::string first;
    std::sort(items.begin(), items.end());
    do {
        TempDir tmp;
        TagDatabase db;
        for (const auto& [u, l] : items) db.bind(u, clip_for(u, l));
        db.persist(tmp.path());
        const std::string text = rfglove::testing::slurp(tmp / "index.tsv");
        if (first.empty()) first = text;
        CHECK(text == first);
    } while (std::next_permutation(items.begin(), items.end()));
}

TEST_CASE("persist removes stale payloads but keeps foreign files") {
    TempDir tmp;
    rfglove::testing::spit(tmp / "00000000000000aa.bin", "stale");
    rfglove::testing::spit(tmp / "notes.bin", "keep");
    TagDatabase db;
    db.bind(kA, clip_for(kA, "x"));
    db.persist(tmp.path());
    const auto files = rfglove::testing::payload_files(tmp.path());
    CHECK(files == std::set<std::string>{db.lookup(kA)->clip_id, "notes"});
}

TEST_CASE("load reports the line of a malformed index entry") {
    TempDir tmp;
    auto db = TagDatabase::open(tmp.path());
    db.bind(kA, clip_for(kA, "a"));
    db.bind(kB, clip_for(kB, "b"));
    std::string index = rfglove::testing::slurp(tmp / "index.tsv");
    const auto second = index.find('\n') + 1;
    index[index.find('\t', second)] = ' ';
    rfglove::testing::spit(tmp / "index.tsv", index);
    try {
        (void)TagDatabase::load(tmp.path());
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("load rejects malformed fields") {
    const std::string id = "0123456789abcdef";
    const std::vector<std::string> bad{
        "04A1B2C3\t" + id + "\t3000\tx\n",          // uppercase uid
        "04a1b2\t" + id + "\t3000\tx\n",            // short uid
        "04a1b2c3\tnothex\t3000\tx\n",              // clip id
        "04a1b2c3\t" + id + "\t0\tx\n",             // duration
        "04a1b2c3\t" + id + "\t12ms\tx\n",          // duration
        "04a1b2c3\t" + id + "\t3000\tx\ty\n",       // extra field
        "04a1b2c3\t" + id + "\t3000\tx\n04a1b2c3\t" + id + "\t3000\ty\n",  // duplicate uid
    };
    for (const auto& text : bad) {
        TempDir tmp;
        rfglove::testing::spit(tmp / "index.tsv", text);
        rfglove::testing::spit(tmp / (id + ".bin"), "");
        CHECK_THROWS_AS((void)TagDatabase::load(tmp.path()), ParseError);
    }
}

TEST_CASE("load names a missing payload") {
    TempDir tmp;
    auto db = TagDatabase::open(tmp.path());
    db.bind(kA, clip_for(kA, "a"));
    const std::string id = db.lookup(kA)->clip_id;
    fs::remove(tmp / (id + ".bin"));
    try {
        (void)TagDatabase::load(tmp.path());
        FAIL("expected a persistence error");
    } catch (const PersistenceError& e) {
        CHECK(std::string(e.what()).find(id) != std::string::npos);
    }
}

TEST_CASE("load of a directory without an index fails") {
    TempDir tmp;
    CHECK_THROWS_AS((void)TagDatabase::load(tmp.path()), PersistenceError);
    CHECK_THROWS_AS((void)TagDatabase::load(tmp / "missing"), PersistenceError);
}

TEST_CASE("storage failure surfaces and leaves the database unchanged") {
    TempDir tmp;
    const fs::path store = tmp / "store";
    auto db = TagDatabase::open(store);
    db.bind(kA, clip_for(kA, "a"));
    const auto before = db.bindings();
    fs::remove_all(store);

    CHECK_THROWS_AS(db.bind(kB, clip_for(kB, "b")), PersistenceError);
    CHECK(db.bindings() == before);
    CHECK_THROWS_AS(db.remove(kA), PersistenceError);
    CHECK(db.bindings() == before);
}

TEST_CASE("random bind/remove sequences agree with a reference map") {
    std::mt19937_64 rng(20260101);
    const std::vector<TagUid> pool{kA, kB, kC, TagUid::from_hex("04000000000001"), TagUid::from_hex("deadbeef")};
    for (int seq = 0; seq < 60; ++seq) {
        TempDir tmp;
        auto db = TagDatabase::open(tmp.path());
        std::map<TagUid, std::string> ref;
        for (int op = 0; op < 25; ++op) {
            const TagUid& u = pool[rng() % pool.size()];
            if (rng() % 3 == 0) {
                db.remove(u);
                ref.erase(u);
            } else {
                const std::string label = "l" + std::to_string(rng() % 7);
                db.bind(u, clip_for(u, label));
                ref[u] = label;
            }
            REQUIRE(db.size() == ref.size());
            for (const auto& u2 : pool) {
                const auto got = db.lookup(u2);
                REQUIRE(got.has_value() == ref.contains(u2));
                if (got) REQUIRE(got->label == ref[u2]);
            }
            REQUIRE(rfglove::testing::payload_files(tmp.path()) ==
                    rfglove::testing::index_clip_ids(rfglove::testing::slurp(tmp / "index.tsv")));
        }
    }
}

}  // TEST_SUITE
