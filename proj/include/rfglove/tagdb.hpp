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

// Onboard tag -> audio clip database.
//
// On-disk layout of a store directory:
//   <dir>/index.tsv        one line per binding, sorted by uid hex:
//                          <uid-hex>\t<clip_id>\t<duration_ms>\t<label>\n
//   <dir>/<clip_id>.bin    raw payload bytes, one file per bound clip
//
// Invariant: the set of *.bin payload files equals the set of clip ids
// referenced from index.tsv after every successful mutation.

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "rfglove/tag_uid.hpp"

namespace rfglove {

struct AudioClip {
    std::string clip_id;  // 16 lowercase hex chars
    std::chrono::milliseconds duration{0};
    std::string label;    // stands in for the recorded voice
    std::string payload;  // opaque bytes, may be empty

    bool operator==(const AudioClip&) const = default;
};

/// Content-derived clip id: FNV-1a 64 over uid, label and payload.
std::string make_clip_id(const TagUid& uid, std::string_view label, std::string_view payload);

/// Builds a clip whose id is make_clip_id(uid, label, payload).
AudioClip make_clip(const TagUid& uid, std::string label, std::string payload,
                    std::chrono::milliseconds duration);

bool is_valid_clip_id(std::string_view id) noexcept;

class TagDatabase {
public:
    static constexpr std::string_view kIndexName = "index.tsv";
    static constexpr std::string_view kPayloadExt = ".bin";

    /// In-memory database with no backing store.
    TagDatabase() = default;

    /// Reads an existing store directory; the result writes through to it.
    /// Throws ParseError (with line) on a malformed index and PersistenceError
    /// when the directory, index or a referenced payload is missing.
    static TagDatabase load(const std::filesystem::path& dir);

    /// Loads `dir` if it holds an index, otherwise creates an empty store there.
    static TagDatabase open(const std::filesystem::path& dir);

    std::optional<AudioClip> lookup(const TagUid& uid) const;
    const AudioClip* find(const TagUid& uid) const;
    bool contains(const TagUid& uid) const { return bindings_.contains(uid); }

    /// Maps uid to clip, replacing (and deleting the payload of) any previous
    /// binding. Throws std::invalid_argument for a zero duration, a malformed
    /// clip id, a label containing TAB/CR/LF, or a clip id already bound to a
    /// different uid. Throws PersistenceError if the store cannot be
    /// updated; the database is unchanged in every error case.
    void bind(const TagUid& uid, AudioClip clip);

    /// Removing an absent uid is a no-op.
    void remove(const TagUid& uid);

    /// Writes a full snapshot (index and payloads) to `dir`, deleting payload
    /// files there that the snapshot does not reference. Does not change
    /// which store this database writes through to.
    void persist(const std::filesystem::path& dir) const;

    /// Exact bytes persist() writes to index.tsv.
    std::string index_text() const;

    const std::map<TagUid, AudioClip>& bindings() const noexcept { return bindings_; }
    std::size_t size() const noexcept { return bindings_.size(); }
    bool empty() const noexcept { return bindings_.empty(); }
    const std::optional<std::filesystem::path>& store_path() const noexcept { return store_; }

    bool operator==(const TagDatabase& other) const { return bindings_ == other.bindings_; }

private:
    std::map<TagUid, AudioClip> bindings_;
    std::optional<std::filesystem::path> store_;
};

}  // namespace rfglove
