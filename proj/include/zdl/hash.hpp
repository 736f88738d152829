#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace zdl {

/// FNV-1a, 64-bit. Used for stable fingerprints, not for integrity checks.
constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (const char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t v);

}  // namespace zdl
