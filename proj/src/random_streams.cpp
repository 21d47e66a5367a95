#include "fjq/random_streams.hpp"

namespace fjq::sim {

std::mt19937_64 RandomStreams::make(std::uint64_t seed, std::uint32_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32), stream_id,
                      0x666a7131u};
    return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

}  // namespace fjq::sim
