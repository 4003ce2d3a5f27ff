#include "lcodr/random.hpp"

#include <array>

namespace lcodr::rng {

Engine substream(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    const std::array<std::uint32_t, 6> key{lo(seed), hi(seed), lo(index), hi(index), lo(stream), hi(stream)};
    std::seed_seq seq(key.begin(), key.end());
    return Engine(seq);
}

}  // namespace lcodr::rng
