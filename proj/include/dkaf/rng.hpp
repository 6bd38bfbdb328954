#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dkaf {

// FNV-1a over (master_seed, tag, index). All subsystem seeds are derived
// through this single function so that one master seed pins every stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index = 0) {
    constexpr std::uint64_t kOffset = 1469598103934665603ull;
    constexpr std::uint64_t kPrime = 1099511628211ull;
    std::uint64_t h = kOffset;
    auto mix_byte = [&](std::uint8_t b) {
        h ^= b;
        h *= kPrime;
    };
    for (int i = 0; i < 8; ++i) mix_byte(static_cast<std::uint8_t>(master >> (8 * i)));
    for (char c : tag) mix_byte(static_cast<std::uint8_t>(c));
    for (int i = 0; i < 8; ++i) mix_byte(static_cast<std::uint8_t>(index >> (8 * i)));
    return h;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, std::string_view tag, std::uint64_t index = 0) {
    return Rng(derive_seed(master, tag, index));
}

} // namespace dkaf
