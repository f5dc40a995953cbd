#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace chroma {

inline std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Child seed for a named stream; streams with different keys are independent of
/// evaluation order, so per-vertex or per-attempt work can be reordered freely.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = splitmix64(seed);
    for (auto k : keys)
        h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {})
{
    return Rng(derive_seed(seed, keys));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p)
{
    if (p >= 1.0)
        return true;
    if (p <= 0.0)
        return false;
    return uniform01(rng) < p;
}

} // namespace chroma
