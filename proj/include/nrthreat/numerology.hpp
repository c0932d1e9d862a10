// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "nrthreat/errors.hpp"

namespace nrthreat {

inline constexpr int kSubcarriersPerRb = 12;
inline constexpr int kSymbolsPerSlot = 14;
inline constexpr int kSubframesPerFrame = 10;
inline constexpr double kFrameMs = 10.0;

enum class BandClass { sub6, mmwave };

// One subcarrier-spacing option of the 5G NR sub-carrier numerology set.
struct Numerology {
    int scs_khz;
    int slots_per_subframe;
    BandClass band_class;
    double min_bw_mhz;
    double max_bw_mhz;
};

// Frame geometry for a given (bandwidth, spacing) carrier.
struct GridDimensions {
    int subcarriers;
    int symbols_per_frame;
    int slots_per_frame;
    long res_per_frame;
};

namespace detail {

inline constexpr std::array<Numerology, 5> kNumerologies{{
    {15, 1, BandClass::sub6, 4.32, 49.5},
    {30, 2, BandClass::sub6, 8.64, 99.0},
    {60, 4, BandClass::sub6, 17.28, 198.0},
    {120, 8, BandClass::mmwave, 34.56, 396.0},
    {240, 16, BandClass::mmwave, 69.12, 397.44},
}};

// Resource-block counts per channel bandwidth, sub-6 GHz spacings only.
// 0 marks combinations with no defined RB count.
inline constexpr std::array<double, 13> kRbTableBwMhz{
    5, 10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 100};

inline constexpr std::array<std::array<int, 13>, 3> kRbTable{{
    // 15 kHz
    {25, 52, 79, 106, 133, 160, 216, 270, 0, 0, 0, 0, 0},
    // 30 kHz
    {11, 24, 38, 51, 65, 78, 106, 133, 162, 189, 217, 245, 273},
    // 60 kHz
    {0, 11, 18, 24, 31, 38, 51, 65, 79, 93, 107, 121, 135},
}};

inline int rb_table_row(int scs_khz) {
    switch (scs_khz) {
        case 15: return 0;
        case 30: return 1;
        case 60: return 2;
        default: return -1;
    }
}

}  // namespace detail

inline Numerology numerology_for(int scs_khz) {
    for (const auto& n : detail::kNumerologies) {
        if (n.scs_khz == scs_khz) return n;
    }
    throw UnknownSpacing("subcarrier spacing " + std::to_string(scs_khz) +
                         " kHz is not a defined numerology");
}

// RB count for a (bandwidth, spacing) pair. Only the tabulated channel
// bandwidths are valid; there is no interpolation.
inline int rb_count(double bw_mhz, int scs_khz) {
    const int row = detail::rb_table_row(scs_khz);
    if (row < 0) {
        // Distinguish an undefined spacing from a defined mmWave one.
        numerology_for(scs_khz);
        throw UnsupportedCombination("no RB counts defined for " +
                                     std::to_string(scs_khz) +
                                     " kHz spacing (mmWave band)");
    }
    for (std::size_t col = 0; col < detail::kRbTableBwMhz.size(); ++col) {
        if (std::abs(detail::kRbTableBwMhz[col] - bw_mhz) < 1e-9) {
            const int rbs = detail::kRbTable[static_cast<std::size_t>(row)][col];
            if (rbs == 0) {
                throw UnsupportedCombination(
                    std::to_string(bw_mhz) + " MHz at " + std::to_string(scs_khz) +
                    " kHz has no defined RB count");
            }
            return rbs;
        }
    }
    throw UnsupportedCombination(std::to_string(bw_mhz) +
                                 " MHz is not a tabulated channel bandwidth");
}

inline GridDimensions grid_dimensions(double bw_mhz, int scs_khz) {
    const int rbs = rb_count(bw_mhz, scs_khz);
    const Numerology num = numerology_for(scs_khz);
    GridDimensions d{};
    d.subcarriers = kSubcarriersPerRb * rbs;
    d.slots_per_frame = kSubframesPerFrame * num.slots_per_subframe;
    d.symbols_per_frame = kSymbolsPerSlot * d.slots_per_frame;
    d.res_per_frame = static_cast<long>(d.subcarriers) * d.symbols_per_frame;
    return d;
}

}  // namespace nrthreat
