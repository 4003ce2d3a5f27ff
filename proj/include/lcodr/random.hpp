#pragma once

#include <cstdint>
#include <random>

namespace lcodr::rng {

using Engine = std::mt19937_64;

/// Independent engine for the key (seed, index, stream). Keys map to engines
/// without any shared state, so draws do not depend on evaluation order.
Engine substream(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

}  // namespace lcodr::rng
