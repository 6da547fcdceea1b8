#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace diracbs {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text, std::uint64_t seed = 14695981039346656037ull);

/// fnv1a as 16 lowercase hex digits.
std::string hash_hex(std::string_view text);

} // namespace diracbs
