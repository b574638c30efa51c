#pragma once

#include <cstdint>
#include <random>

namespace qtm {

/// Engine used for every stochastic operation.
using Rng = std::mt19937_64;

/// One round of the SplitMix64 output function.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of stream `index` derived from a run seed:
/// splitmix64(seed ^ splitmix64(index + 0x9e3779b97f4a7c15)).
/// Worker i of a partitioned run always uses stream i.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index);

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) { return Rng(derive_stream_seed(seed, index)); }

}  // namespace qtm
