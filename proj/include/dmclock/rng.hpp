#pragma once

#include <cstdint>
#include <random>

namespace dmclock
{

//! Identity of the generator, recorded in Monte Carlo output metadata.
inline constexpr char const rng_name[] = "mt19937_64/splitmix64-substreams";

//! SplitMix64 step; used to derive well-separated sub-stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/*!
 * Engine for sub-stream `stream` of a seeded family.
 *
 * The sub-stream seed depends only on (seed, stream), so work partitioned
 * across threads reproduces the same numbers regardless of scheduling.
 */
inline std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t stream)
{
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~stream)));
}

//! Uniform double on [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& engine)
{
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace dmclock
