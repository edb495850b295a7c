#pragma once

#include <cstdint>
#include <random>

namespace treegaze {

using Rng = std::mt19937_64;

/// Engine for replicate `stream` of a run seeded with `seed`. Replicates get
/// independent streams so results do not depend on evaluation order.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x7a3c5e1du};
    return Rng(seq);
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace treegaze
