// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace nrthreat {

using Rng = std::mt19937_64;

// SplitMix64 step; used to whiten seeds before they reach the engine.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Per-trial seed derived from (master seed, trial index). Trials seeded this
// way produce the same stream whether they run serially or in parallel.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x632be59bd9b4e019ULL * (index + 1));
    std::uint64_t lo = splitmix64(s);
    std::uint64_t hi = splitmix64(s);
    return lo ^ (hi << 1);
}

inline Rng make_trial_rng(std::uint64_t master, std::uint64_t trial_index) {
    return Rng(derive_seed(master, trial_index));
}

}  // namespace nrthreat
