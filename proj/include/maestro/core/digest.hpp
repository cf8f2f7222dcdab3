// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maestro {

using Bytes = std::vector<std::uint8_t>;

/// Lowercase hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::optional<Bytes> base64_decode(std::string_view text);

Bytes to_bytes(std::string_view text);
std::string to_string(std::span<const std::uint8_t> bytes);

bool is_valid_utf8(std::string_view text);

// Code-point views used wherever lengths are counted in characters.
std::u32string utf8_to_u32(std::string_view text);
std::string u32_to_utf8(std::u32string_view text);

} // namespace maestro
