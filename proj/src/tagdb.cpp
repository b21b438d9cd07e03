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
#include "rfglove/tagdb.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <set>
#include <stdexcept>

#include "rfglove/error.hpp"

namespace fs = std::filesystem;

namespace rfglove {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

bool label_is_storable(std::string_view label) {
    return label.find_first_of("\t\r\n") == std::string_view::npos;
}

fs::path payload_path(const fs::path& dir, std::string_view clip_id) {
    return dir / (std::string(clip_id) + std::string(TagDatabase::kPayloadExt));
}

// Write-then-rename so readers never observe a torn file.
void write_file_atomic(const fs::path& target, std::string_view bytes) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw PersistenceError("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw PersistenceError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw PersistenceError("cannot rename " + tmp.string() + " -> " + target.string() + ": " +
                               ec.message());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PersistenceError("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string render_index(const std::map<TagUid, AudioClip>& bindings) {
    std::string out;
    for (const auto& [uid, clip] : bindings) {
        out += uid.hex();
        out += '\t';
        out += clip.clip_id;
        out += '\t';
        out += std::to_string(clip.duration.count());
        out += '\t';
        out += clip.label;
        out += '\n';
    }
    return out;
}

void validate_clip(const AudioClip& clip) {
    if (clip.duration.count() <= 0) {
        throw std::invalid_argument("clip duration must be > 0 ms");
    }
    if (!is_valid_clip_id(clip.clip_id)) {
        throw std::invalid_argument("malformed clip id '" + clip.clip_id + "'");
    }
    if (!label_is_storable(clip.label)) {
        throw std::invalid_argument("clip label may not contain TAB, CR or LF");
    }
}

}  // namespace

std::string make_clip_id(const TagUid& uid, std::string_view label, std::string_view payload) {
    std::uint64_t h = kFnvOffset;
    const auto bytes = uid.bytes();
    h = fnv1a(h, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
    h = fnv1a(h, "\x1f");
    h = fnv1a(h, label);
    h = fnv1a(h, "\x1f");
    h = fnv1a(h, payload);

    static constexpr char kDigits[] = "0123456789abcdef";
    std::string id(16, '0');
    for (int i = 15; i >= 0; --i) {
        id[static_cast<std::size_t>(i)] = kDigits[h & 0x0f];
        h >>= 4;
    }
    return id;
}

AudioClip make_clip(const TagUid& uid, std::string label, std::string payload,
                    std::chrono::milliseconds duration) {
    AudioClip clip;
    clip.clip_id = make_clip_id(uid, label, payload);
    clip.duration = duration;
    clip.label = std::move(label);
    clip.payload = std::move(payload);
    return clip;
}

bool is_valid_clip_id(std::string_view id) noexcept {
    if (id.size() != 16) return false;
    for (char c : id) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
}

std::optional<AudioClip> TagDatabase::lookup(const TagUid& uid) const {
    if (const auto* clip = find(uid)) return *clip;
    return std::nullopt;
}

const AudioClip* TagDatabase::find(const TagUid& uid) const {
    auto it = bindings_.find(uid);
    return it == bindings_.end() ? nullptr : &it->second;
}

void TagDatabase::bind(const TagUid& uid, AudioClip clip) {
    if (uid.empty()) throw std::invalid_argument("cannot bind an empty uid");
    validate_clip(clip);
    for (const auto& [other, bound] : bindings_) {
        if (other != uid && bound.clip_id == clip.clip_id) {
            throw std::invalid_argument("clip id " + clip.clip_id + " already bound to " +
                                        other.hex());
        }
    }

    std::optional<AudioClip> previous = lookup(uid);
    auto next = bindings_;
    next[uid] = clip;

    if (store_) {
        const fs::path fresh = payload_path(*store_, clip.clip_id);
        const bool reuses_file = previous && previous->clip_id == clip.clip_id;
        write_file_atomic(fresh, clip.payload);
        try {
            write_file_atomic(*store_ / kIndexName, render_index(next));
        } catch (...) {
            std::error_code ignored;
            if (!reuses_file) fs::remove(fresh, ignored);
            throw;
        }
        if (previous && !reuses_file) {
            std::error_code ec;
            fs::remove(payload_path(*store_, previous->clip_id), ec);
            if (ec) {
                // Roll the index back so the old payload stays referenced.
                write_file_atomic(*store_ / kIndexName, render_index(bindings_));
                std::error_code ignored;
                fs::remove(fresh, ignored);
                throw PersistenceError("cannot delete replaced payload " + previous->clip_id +
                                       ": " + ec.message());
            }
        }
    }
    bindings_ = std::move(next);
}

void TagDatabase::remove(const TagUid& uid) {
    auto it = bindings_.find(uid);
    if (it == bindings_.end()) return;

    if (store_) {
        auto next = bindings_;
        next.erase(uid);
        write_file_atomic(*store_ / kIndexName, render_index(next));
        std::error_code ec;
        fs::remove(payload_path(*store_, it->second.clip_id), ec);
        if (ec) {
            write_file_atomic(*store_ / kIndexName, render_index(bindings_));
            throw PersistenceError("cannot delete payload " + it->second.clip_id + ": " +
                                   ec.message());
        }
    }
    bindings_.erase(it);
}

std::string TagDatabase::index_text() const { return render_index(bindings_); }

void TagDatabase::persist(const fs::path& dir) const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw PersistenceError("cannot create " + dir.string() + ": " + ec.message());

    std::set<std::string> referenced;
    for (const auto& [uid, clip] : bindings_) {
        write_file_atomic(payload_path(dir, clip.clip_id), clip.payload);
        referenced.insert(clip.clip_id);
    }
    write_file_atomic(dir / kIndexName, index_text());

    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        if (p.extension() != kPayloadExt) continue;
        const std::string stem = p.stem().string();
        if (is_valid_clip_id(stem) && !referenced.contains(stem)) {
            fs::remove(p, ec);
            if (ec) throw PersistenceError("cannot delete stale payload " + p.string());
        }
    }
}

TagDatabase TagDatabase::load(const fs::path& dir) {
    const fs::path index_path = dir / kIndexName;
    if (!fs::is_regular_file(index_path)) {
        throw PersistenceError("no " + std::string(kIndexName) + " in " + dir.string());
    }
    const std::string text = read_file(index_path);

    TagDatabase db;
    std::set<std::string> clip_ids;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        ++line_no;
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;

        std::string_view fields[4];
        std::size_t start = 0;
        for (int f = 0; f < 3; ++f) {
            const std::size_t tab = line.find('\t', start);
            if (tab == std::string_view::npos) {
                throw ParseError(line_no, "expected 4 tab-separated fields");
            }
            fields[f] = line.substr(start, tab - start);
            start = tab + 1;
        }
        fields[3] = line.substr(start);
        if (fields[3].find('\t') != std::string_view::npos) {
            throw ParseError(line_no, "expected 4 tab-separated fields");
        }

        TagUid uid;
        if (!TagUid::try_parse(fields[0], uid) || uid.hex() != fields[0]) {
            throw ParseError(line_no, "bad uid '" + std::string(fields[0]) + "'");
        }
        if (!is_valid_clip_id(fields[1])) {
            throw ParseError(line_no, "bad clip id '" + std::string(fields[1]) + "'");
        }
        std::int64_t duration = 0;
        const auto* first = fields[2].data();
        const auto* last = first + fields[2].size();
        auto [ptr, err] = std::from_chars(first, last, duration);
        if (err != std::errc{} || ptr != last || duration <= 0 || fields[2].empty()) {
            throw ParseError(line_no, "bad duration '" + std::string(fields[2]) + "'");
        }
        if (!label_is_storable(fields[3])) {
            throw ParseError(line_no, "label contains a control character");
        }
        if (db.bindings_.contains(uid)) {
            throw ParseError(line_no, "duplicate uid " + uid.hex());
        }
        if (!clip_ids.insert(std::string(fields[1])).second) {
            throw ParseError(line_no, "duplicate clip id " + std::string(fields[1]));
        }

        AudioClip clip;
        clip.clip_id = std::string(fields[1]);
        clip.duration = std::chrono::milliseconds(duration);
        clip.label = std::string(fields[3]);
        const fs::path payload = payload_path(dir, clip.clip_id);
        if (!fs::is_regular_file(payload)) {
            throw PersistenceError("missing payload for clip " + clip.clip_id);
        }
        clip.payload = read_file(payload);
        db.bindings_.emplace(std::move(uid), std::move(clip));
    }
    db.store_ = dir;
    return db;
}

TagDatabase TagDatabase::open(const fs::path& dir) {
    if (fs::is_regular_file(dir / kIndexName)) return load(dir);
    TagDatabase db;
    db.persist(dir);
    db.store_ = dir;
    return db;
}

}  // namespace rfglove
