#pragma once

#include <cstdint>
#include <random>

namespace fjq::sim {

/// Independent pseudo-random streams derived from one run seed.
///
/// Stream ids: 0 = arrivals, 1 = sampling, 2 + q = service times of
/// sub-queue q. Each stream is a std::mt19937_64 seeded through
/// std::seed_seq{seed low word, seed high word, stream id, tag}, so the
/// sequence of a stream depends only on (seed, id). Variants that share a
/// seed therefore see identical arrival and service draws.
class RandomStreams {
  public:
    static constexpr std::uint32_t arrivals_id = 0;
    static constexpr std::uint32_t sampling_id = 1;
    static constexpr std::uint32_t service_id(int queue) { return 2u + static_cast<std::uint32_t>(queue); }

    static std::mt19937_64 make(std::uint64_t seed, std::uint32_t stream_id);
};

/// Uniform on [0, 1) with 53 random bits.
double uniform01(std::mt19937_64& engine);

}  // namespace fjq::sim
