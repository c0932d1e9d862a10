// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrthreat/errors.hpp"
#include "nrthreat/numerology.hpp"

namespace nrthreat {

enum class ChannelKind : std::uint8_t {
    PSS,
    SSS,
    PBCH,
    PBCH_DMRS,
    PDCCH,
    PDSCH,
    PUCCH,
    PRACH,
    PUSCH,
    UNUSED,
};

inline constexpr std::array<ChannelKind, 10> kAllChannelKinds{
    ChannelKind::PSS,   ChannelKind::SSS,   ChannelKind::PBCH,
    ChannelKind::PBCH_DMRS, ChannelKind::PDCCH, ChannelKind::PDSCH,
    ChannelKind::PUCCH, ChannelKind::PRACH, ChannelKind::PUSCH,
    ChannelKind::UNUSED,
};

inline std::string_view to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::PSS: return "PSS";
        case ChannelKind::SSS: return "SSS";
        case ChannelKind::PBCH: return "PBCH";
        case ChannelKind::PBCH_DMRS: return "PBCH_DMRS";
        case ChannelKind::PDCCH: return "PDCCH";
        case ChannelKind::PDSCH: return "PDSCH";
        case ChannelKind::PUCCH: return "PUCCH";
        case ChannelKind::PRACH: return "PRACH";
        case ChannelKind::PUSCH: return "PUSCH";
        case ChannelKind::UNUSED: return "UNUSED";
    }
    return "UNKNOWN";
}

inline ChannelKind channel_kind_from_string(std::string_view name) {
    for (ChannelKind kind : kAllChannelKinds) {
        if (to_string(kind) == name) return kind;
    }
    throw ConfigError("unknown channel label: " + std::string(name));
}

enum class Direction { downlink, uplink };

// Width of the synchronization block band in subcarriers, and of the
// PSS/SSS sequences inside it.
inline constexpr int kSsbBandSubcarriers = 240;
inline constexpr int kSyncSubcarriers = 127;
// Modeled SSB block: 1 PSS symbol + 1 SSS symbol + 3 full-band PBCH symbols.
inline constexpr int kSsbPbchSymbolsPerBlock = 3;
inline constexpr int kSsbSymbolsPerBlock = 2 + kSsbPbchSymbolsPerBlock;
inline constexpr int kSsbBlocksPerSlot = 2;
// SSB blocks start after the largest possible CORESET (3 symbols).
inline constexpr int kSsbFirstSymbolInSlot = 3;
inline constexpr int kPbchDmrsSpacing = 4;

struct GridConfig {
    double bw_mhz = 20.0;
    int scs_khz = 30;
    bool carrier_below_3ghz = true;
    Direction direction = Direction::downlink;
    int coreset_time_dur = 1;
    // Subcarriers covered by the CORESET, anchored at the band bottom.
    // Unset means the full carrier.
    std::optional<int> coreset_subcarrier_span;
    int ssb_blocks_per_frame = 4;
    // First subcarrier of the 240-wide SSB band. Unset means centered.
    std::optional<int> ssb_subcarrier_offset;
    double pucch_fraction = 0.10;
    double prach_fraction = 0.02;
};

// Per-RE channel occupancy of one 10 ms frame. Immutable once built.
class ResourceGrid {
public:
    ResourceGrid(GridConfig config, GridDimensions dims,
                 std::vector<ChannelKind> labels)
        : config_(config), dims_(dims), labels_(std::move(labels)) {
        counts_.fill(0);
        for (ChannelKind label : labels_) {
            ++counts_[static_cast<std::size_t>(label)];
        }
    }

    const GridConfig& config() const { return config_; }
    const GridDimensions& dims() const { return dims_; }
    Direction direction() const { return config_.direction; }

    // Labels are stored row-major with one row per OFDM symbol.
    ChannelKind at(int symbol, int subcarrier) const {
        return labels_[static_cast<std::size_t>(symbol) * dims_.subcarriers +
                       subcarrier];
    }
    const std::vector<ChannelKind>& labels() const { return labels_; }

    long count(ChannelKind kind) const {
        return counts_[static_cast<std::size_t>(kind)];
    }

private:
    GridConfig config_;
    GridDimensions dims_;
    std::vector<ChannelKind> labels_;
    std::array<long, kAllChannelKinds.size()> counts_{};
};

inline long re_count(const ResourceGrid& grid, ChannelKind kind) {
    return grid.count(kind);
}

// Fraction of frame REs carrying exactly this label. Sums to 1 over all kinds.
inline double re_fraction(const ResourceGrid& grid, ChannelKind kind) {
    return static_cast<double>(grid.count(kind)) / grid.dims().res_per_frame;
}

// Fraction of frame REs belonging to the channel as a whole. Identical to
// re_fraction except for PBCH, whose region includes its DM-RS pilots.
inline double channel_fraction(const ResourceGrid& grid, ChannelKind kind) {
    long count = grid.count(kind);
    if (kind == ChannelKind::PBCH) count += grid.count(ChannelKind::PBCH_DMRS);
    return static_cast<double>(count) / grid.dims().res_per_frame;
}

namespace detail {

inline void validate_common(const GridConfig& config, const GridDimensions& dims) {
    if (config.coreset_time_dur < 1 || config.coreset_time_dur > 3) {
        throw ConfigConflict("coreset_time_dur must be 1, 2, or 3");
    }
    if (config.coreset_subcarrier_span &&
        (*config.coreset_subcarrier_span < 1 ||
         *config.coreset_subcarrier_span > dims.subcarriers)) {
        throw ConfigConflict("coreset_subcarrier_span exceeds the carrier");
    }
    if (config.pucch_fraction < 0.0 || config.pucch_fraction > 1.0 ||
        config.prach_fraction < 0.0 || config.prach_fraction > 1.0) {
        throw ConfigConflict("channel fractions must lie in [0, 1]");
    }
    if (config.ssb_blocks_per_frame < 0) {
        throw ConfigConflict("ssb_blocks_per_frame must be non-negative");
    }
}

}  // namespace detail

inline ResourceGrid build_downlink_grid(const GridConfig& config) {
    if (config.direction != Direction::downlink) {
        throw ConfigConflict("build_downlink_grid requires direction=downlink");
    }
    const GridDimensions dims = grid_dimensions(config.bw_mhz, config.scs_khz);
    detail::validate_common(config, dims);

    const int ssb_slot_budget = config.carrier_below_3ghz ? 2 : 4;
    if (config.ssb_blocks_per_frame > kSsbBlocksPerSlot * ssb_slot_budget) {
        throw ConfigConflict("SSB burst does not fit in the first " +
                             std::to_string(ssb_slot_budget) + " slots");
    }
    int ssb_start = 0;
    if (config.ssb_blocks_per_frame > 0) {
        if (dims.subcarriers < kSsbBandSubcarriers) {
            throw ConfigConflict("carrier too narrow for a 240-subcarrier SSB band");
        }
        ssb_start = config.ssb_subcarrier_offset
                        ? *config.ssb_subcarrier_offset
                        : (dims.subcarriers - kSsbBandSubcarriers) / 2;
        if (ssb_start < 0 || ssb_start + kSsbBandSubcarriers > dims.subcarriers) {
            throw ConfigConflict("SSB band extends past the carrier edge");
        }
    }

    std::vector<ChannelKind> labels(static_cast<std::size_t>(dims.res_per_frame),
                                    ChannelKind::PDSCH);
    const auto label_at = [&](int symbol, int subcarrier) -> ChannelKind& {
        return labels[static_cast<std::size_t>(symbol) * dims.subcarriers +
                      subcarrier];
    };

    // CORESET: the first coreset_time_dur symbols of every slot.
    const int coreset_span =
        config.coreset_subcarrier_span.value_or(dims.subcarriers);
    for (int slot = 0; slot < dims.slots_per_frame; ++slot) {
        for (int sym = 0; sym < config.coreset_time_dur; ++sym) {
            const int symbol = slot * kSymbolsPerSlot + sym;
            for (int sc = 0; sc < coreset_span; ++sc) {
                label_at(symbol, sc) = ChannelKind::PDCCH;
            }
        }
    }

    // SSB blocks, two per slot from slot 0, each spanning five symbols
    // placed after the CORESET region.
    const int sync_start = ssb_start + (kSsbBandSubcarriers - kSyncSubcarriers) / 2;
    for (int block = 0; block < config.ssb_blocks_per_frame; ++block) {
        const int slot = block / kSsbBlocksPerSlot;
        const int pos = block % kSsbBlocksPerSlot;
        const int first_symbol = slot * kSymbolsPerSlot + kSsbFirstSymbolInSlot +
                                 pos * kSsbSymbolsPerBlock;
        // PSS then SSS, each 127 subcarriers; the rest of the SSB band in
        // those symbols is guard.
        for (int s = 0; s < 2; ++s) {
            const int symbol = first_symbol + s;
            for (int sc = ssb_start; sc < ssb_start + kSsbBandSubcarriers; ++sc) {
                label_at(symbol, sc) = ChannelKind::UNUSED;
            }
            const ChannelKind kind = (s == 0) ? ChannelKind::PSS : ChannelKind::SSS;
            for (int sc = sync_start; sc < sync_start + kSyncSubcarriers; ++sc) {
                label_at(symbol, sc) = kind;
            }
        }
        // PBCH symbols cover the full band; every 4th subcarrier is DM-RS.
        for (int s = 0; s < kSsbPbchSymbolsPerBlock; ++s) {
            const int symbol = first_symbol + 2 + s;
            for (int sc = ssb_start; sc < ssb_start + kSsbBandSubcarriers; ++sc) {
                const bool dmrs = ((sc - ssb_start) % kPbchDmrsSpacing) == 0;
                label_at(symbol, sc) =
                    dmrs ? ChannelKind::PBCH_DMRS : ChannelKind::PBCH;
            }
        }
    }

    return ResourceGrid(config, dims, std::move(labels));
}

inline ResourceGrid build_uplink_grid(const GridConfig& config) {
    if (config.direction != Direction::uplink) {
        throw ConfigConflict("build_uplink_grid requires direction=uplink");
    }
    const GridDimensions dims = grid_dimensions(config.bw_mhz, config.scs_khz);
    detail::validate_common(config, dims);
    if (config.pucch_fraction + config.prach_fraction > 1.0) {
        throw ConfigConflict("pucch_fraction + prach_fraction exceeds 1");
    }

    std::vector<ChannelKind> labels(static_cast<std::size_t>(dims.res_per_frame),
                                    ChannelKind::PUSCH);
    const auto label_at = [&](int symbol, int subcarrier) -> ChannelKind& {
        return labels[static_cast<std::size_t>(symbol) * dims.subcarriers +
                      subcarrier];
    };

    const int rbs = dims.subcarriers / kSubcarriersPerRb;

    // PUCCH: whole RBs at both band edges, all symbols.
    const int pucch_rbs =
        static_cast<int>(std::lround(config.pucch_fraction * rbs));
    const int bottom_rbs = (pucch_rbs + 1) / 2;
    const int top_rbs = pucch_rbs / 2;
    for (int symbol = 0; symbol < dims.symbols_per_frame; ++symbol) {
        for (int sc = 0; sc < bottom_rbs * kSubcarriersPerRb; ++sc) {
            label_at(symbol, sc) = ChannelKind::PUCCH;
        }
        for (int sc = dims.subcarriers - top_rbs * kSubcarriersPerRb;
             sc < dims.subcarriers; ++sc) {
            label_at(symbol, sc) = ChannelKind::PUCCH;
        }
    }

    // PRACH: a 12-RB-wide window just above the bottom PUCCH region,
    // occupying the leading symbols of the frame until the requested RE
    // budget is met.
    const long prach_target =
        std::lround(config.prach_fraction * static_cast<double>(dims.res_per_frame));
    if (prach_target > 0) {
        const int avail_rbs = rbs - pucch_rbs;
        const int prach_rbs = std::min(12, avail_rbs);
        if (prach_rbs <= 0) {
            throw ConfigConflict("no subcarriers left for the PRACH window");
        }
        const int prach_sc = prach_rbs * kSubcarriersPerRb;
        const long prach_symbols =
            std::lround(static_cast<double>(prach_target) / prach_sc);
        if (prach_symbols > dims.symbols_per_frame) {
            throw ConfigConflict("prach_fraction does not fit the PRACH window");
        }
        const int first_sc = bottom_rbs * kSubcarriersPerRb;
        for (long symbol = 0; symbol < prach_symbols; ++symbol) {
            for (int sc = first_sc; sc < first_sc + prach_sc; ++sc) {
                label_at(static_cast<int>(symbol), sc) = ChannelKind::PRACH;
            }
        }
    }

    return ResourceGrid(config, dims, std::move(labels));
}

inline ResourceGrid build_grid(const GridConfig& config) {
    return config.direction == Direction::downlink ? build_downlink_grid(config)
                                                   : build_uplink_grid(config);
}

}  // namespace nrthreat
