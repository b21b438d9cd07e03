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

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rfglove {

/// ISO 14443A tag identifier: 4 (single size) or 7 (double size) bytes.
///
/// Ordering is lexicographic over the bytes, which coincides with ordering
/// of the lowercase hex text form.
class TagUid {
public:
    TagUid() = default;

    /// Throws std::invalid_argument unless `bytes` has length 4 or 7.
    explicit TagUid(std::span<const std::uint8_t> bytes);

    /// Parses lowercase or uppercase hex without separators (8 or 14 digits).
    /// Throws std::invalid_argument on anything else.
    static TagUid from_hex(std::string_view hex);

    /// Non-throwing variant of from_hex.
    static bool try_parse(std::string_view hex, TagUid& out) noexcept;

    std::string hex() const;
    std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
    bool empty() const noexcept { return bytes_.empty(); }

    auto operator<=>(const TagUid&) const = default;
    bool operator==(const TagUid&) const = default;

private:
    std::vector<std::uint8_t> bytes_;
};

}  // namespace rfglove

template <>
struct std::hash<rfglove::TagUid> {
    std::size_t operator()(const rfglove::TagUid& uid) const noexcept {
        std::size_t h = 0;
        for (auto b : uid.bytes()) h = h * 131 + b;
        return h;
    }
};
