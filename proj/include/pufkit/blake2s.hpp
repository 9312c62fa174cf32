#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace pufkit {

// BLAKE2s with a 16-byte digest (BLAKE2s-128), unkeyed, sequential mode.
std::array<uint8_t, 16> hash128(const uint8_t* data, size_t len);

inline std::array<uint8_t, 16> hash128(const std::vector<uint8_t>& v) {
    return hash128(v.data(), v.size());
}

}  // namespace pufkit
