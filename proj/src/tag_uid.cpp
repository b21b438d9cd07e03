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
#include "rfglove/tag_uid.hpp"

#include <stdexcept>

namespace rfglove {
namespace {

int hex_value(char c) noexcept {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

TagUid::TagUid(std::span<const std::uint8_t> bytes) : bytes_(bytes.begin(), bytes.end()) {
    if (bytes_.size() != 4 && bytes_.size() != 7) {
        throw std::invalid_argument("tag uid must be 4 or 7 bytes, got " +
                                    std::to_string(bytes_.size()));
    }
}

bool TagUid::try_parse(std::string_view hex, TagUid& out) noexcept {
    if (hex.size() != 8 && hex.size() != 14) return false;
    std::vector<std::uint8_t> bytes;
    bytes.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_value(hex[i]);
        const int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) return false;
        bytes.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
    }
    out.bytes_ = std::move(bytes);
    return true;
}

TagUid TagUid::from_hex(std::string_view hex) {
    TagUid uid;
    if (!try_parse(hex, uid)) {
        throw std::invalid_argument("invalid tag uid '" + std::string(hex) +
                                    "' (expected 8 or 14 hex digits)");
    }
    return uid;
}

std::string TagUid::hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 2);
    for (auto b : bytes_) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

}  // namespace rfglove
