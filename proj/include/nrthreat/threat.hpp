// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nrthreat/csv.hpp"
#include "nrthreat/errors.hpp"
#include "nrthreat/grid.hpp"

namespace nrthreat {

enum class ParamsRequired { None, Low, Medium, High };

inline std::string_view to_string(ParamsRequired params) {
    switch (params) {
        case ParamsRequired::None: return "None";
        case ParamsRequired::Low: return "Low";
        case ParamsRequired::Medium: return "Medium";
        case ParamsRequired::High: return "High";
    }
    return "None";
}

inline ParamsRequired params_required_from_string(std::string_view name) {
    if (name == "None") return ParamsRequired::None;
    if (name == "Low") return ParamsRequired::Low;
    if (name == "Medium") return ParamsRequired::Medium;
    if (name == "High") return ParamsRequired::High;
    throw ConfigError("unknown params_required level: " + std::string(name));
}

// J/S averaged over the whole frame, given the on-channel J/S and the
// channel's share of frame REs.
inline double js_frame(double js_ch_db, double re_fraction) {
    if (re_fraction <= 0.0) {
        throw ZeroFraction("re_fraction must be positive");
    }
    if (re_fraction > 1.0) {
        throw ConfigConflict("re_fraction cannot exceed 1");
    }
    return js_ch_db + 10.0 * std::log10(re_fraction);
}

// Power advantage of jamming only this fraction of REs instead of the
// whole band.
inline double jamming_gain_db(double re_fraction) {
    if (re_fraction <= 0.0) {
        throw ZeroFraction("re_fraction must be positive");
    }
    return -10.0 * std::log10(re_fraction);
}

// Ordinal attacker-complexity score: one point for needing cell sync plus
// zero to three for the parameter knowledge level.
inline int complexity_score(bool sync_required, ParamsRequired params) {
    return (sync_required ? 1 : 0) + static_cast<int>(params);
}

// Occupancy stated directly instead of read off a grid, for attacks whose
// footprint follows the attacker model (fake PSS bursts).
struct AttackOccupancy {
    long re_count = 0;
    int period_frames = 1;
    std::string note;
};

struct AttackProfile {
    std::string name;
    std::string modulation;
    std::string coding;
    bool sync_required = false;
    ParamsRequired params_required = ParamsRequired::None;
    double js_ch_db = 0.0;
    // Exactly one of the two occupancy sources is set.
    std::optional<ChannelKind> grid_channel;
    std::optional<AttackOccupancy> occupancy;
};

struct ThreatEntry {
    std::string channel;
    std::string modulation;
    std::string coding;
    double re_fraction = 0.0;
    bool sync_required = false;
    ParamsRequired params_required = ParamsRequired::None;
    double js_ch_db = 0.0;
    double js_frame_db = 0.0;
    int complexity = 0;
};

// The nine attacks with their modulation/coding, synchronization and
// parameter-knowledge requirements, and minimum on-channel J/S for DoS.
inline std::vector<AttackProfile> default_attack_profiles(int spoofed_pss_count = 3,
                                                          int spoofing_period_frames = 2) {
    if (spoofed_pss_count < 1 || spoofing_period_frames < 1) {
        throw ConfigConflict("spoofing occupancy needs at least one PSS per period");
    }
    std::vector<AttackProfile> profiles;
    const auto add = [&](std::string name, std::string mod, std::string coding,
                         bool sync, ParamsRequired params, double js_ch,
                         ChannelKind kind) {
        profiles.push_back({std::move(name), std::move(mod), std::move(coding),
                            sync, params, js_ch, kind, std::nullopt});
    };
    add("PDSCH", "{4, 16, 64, 256}-QAM", "LDPC", false, ParamsRequired::None, 0.0,
        ChannelKind::PDSCH);
    add("PBCH", "QPSK", "Polar", true, ParamsRequired::None, 0.0, ChannelKind::PBCH);
    add("PDCCH", "QPSK", "Polar", true, ParamsRequired::Medium, 0.0,
        ChannelKind::PDCCH);
    add("PUSCH", "{4, 16, 64, 256}-QAM", "LDPC", false, ParamsRequired::None, 0.0,
        ChannelKind::PUSCH);
    add("PUCCH", "QPSK", "Variety", true, ParamsRequired::High, 0.0,
        ChannelKind::PUCCH);
    add("PRACH", "Zadoff-Chu Sequence", "N/A", true, ParamsRequired::Medium, 10.0,
        ChannelKind::PRACH);
    add("SSS", "Gold Sequences", "N/A", true, ParamsRequired::None, 10.0,
        ChannelKind::SSS);
    add("PBCH DM-RS", "QPSK", "N/A", true, ParamsRequired::Low, 3.0,
        ChannelKind::PBCH_DMRS);

    AttackProfile spoofing;
    spoofing.name = "PSS (Spoofing)";
    spoofing.modulation = "M-Sequences";
    spoofing.coding = "N/A";
    spoofing.sync_required = false;
    spoofing.params_required = ParamsRequired::None;
    spoofing.js_ch_db = 10.0;
    spoofing.occupancy = AttackOccupancy{
        long(spoofed_pss_count) * 127, spoofing_period_frames,
        std::to_string(spoofed_pss_count) + " fake PSS per " +
            std::to_string(spoofing_period_frames) + " frames"};
    profiles.push_back(std::move(spoofing));
    return profiles;
}

// Builds both grids from the base config and evaluates every attack,
// sorted by channel name.
inline std::vector<ThreatEntry> assess(const GridConfig& base,
                                       std::span<const AttackProfile> profiles) {
    GridConfig dl = base;
    dl.direction = Direction::downlink;
    GridConfig ul = base;
    ul.direction = Direction::uplink;
    const ResourceGrid downlink = build_downlink_grid(dl);
    const ResourceGrid uplink = build_uplink_grid(ul);

    const auto is_uplink_channel = [](ChannelKind kind) {
        return kind == ChannelKind::PUCCH || kind == ChannelKind::PRACH ||
               kind == ChannelKind::PUSCH;
    };

    std::vector<ThreatEntry> entries;
    entries.reserve(profiles.size());
    for (const AttackProfile& profile : profiles) {
        double fraction = 0.0;
        if (profile.grid_channel) {
            const ResourceGrid& grid =
                is_uplink_channel(*profile.grid_channel) ? uplink : downlink;
            fraction = channel_fraction(grid, *profile.grid_channel);
        } else if (profile.occupancy) {
            fraction = double(profile.occupancy->re_count) /
                       (double(profile.occupancy->period_frames) *
                        double(downlink.dims().res_per_frame));
        } else {
            throw ConfigConflict("attack profile '" + profile.name +
                                 "' has no occupancy source");
        }
        ThreatEntry entry;
        entry.channel = profile.name;
        entry.modulation = profile.modulation;
        entry.coding = profile.coding;
        entry.re_fraction = fraction;
        entry.sync_required = profile.sync_required;
        entry.params_required = profile.params_required;
        entry.js_ch_db = profile.js_ch_db;
        entry.js_frame_db = js_frame(profile.js_ch_db, fraction);
        entry.complexity = complexity_score(profile.sync_required,
                                            profile.params_required);
        entries.push_back(std::move(entry));
    }
    std::sort(entries.begin(), entries.end(),
              [](const ThreatEntry& a, const ThreatEntry& b) {
                  return a.channel < b.channel;
              });
    return entries;
}

struct RankingPoint {
    std::string attack;
    double efficiency_db;  // -js_frame_db; higher is cheaper for the jammer
    int complexity;
};

inline std::vector<RankingPoint> ranking_scatter(std::span<const ThreatEntry> entries) {
    std::vector<RankingPoint> points;
    points.reserve(entries.size());
    for (const ThreatEntry& entry : entries) {
        points.push_back({entry.channel, -entry.js_frame_db, entry.complexity});
    }
    return points;
}

// Log-distance received power with a 1 m reference distance.
inline double link_budget_dbm(double tx_power_dbm, double antenna_gains_db,
                              double path_loss_exponent, double reference_loss_db,
                              double distance_m) {
    if (distance_m <= 0.0) {
        throw NonPositiveDistance("distance must be positive");
    }
    return tx_power_dbm + antenna_gains_db - reference_loss_db -
           10.0 * path_loss_exponent * std::log10(distance_m);
}

// Report rounding: nearest integer, ties away from zero. Raw values stay in
// the machine-readable columns.
inline long display_round_db(double value) { return std::lround(value); }

inline std::string threat_table_csv(std::span<const ThreatEntry> entries) {
    std::string out =
        "channel,modulation,coding,re_fraction,re_percent_display,sync_required,"
        "params_required,js_ch_db,js_frame_db,js_frame_db_display,complexity_score\n";
    for (const ThreatEntry& entry : entries) {
        char percent[32];
        std::snprintf(percent, sizeof(percent), "%.1f", 100.0 * entry.re_fraction);
        out += csv_field(entry.channel) + ',' + csv_field(entry.modulation) + ',' +
               csv_field(entry.coding) + ',' +
               fmt_double(entry.re_fraction) + ',' + percent + ',' +
               (entry.sync_required ? "Yes" : "No") + ',' +
               std::string(to_string(entry.params_required)) + ',' +
               fmt_double(entry.js_ch_db) + ',' + fmt_double(entry.js_frame_db) +
               ',' + std::to_string(display_round_db(entry.js_frame_db)) + ',' +
               std::to_string(entry.complexity) + '\n';
    }
    return out;
}

inline std::string ranking_csv(std::span<const RankingPoint> points) {
    std::string out = "attack,efficiency_db,complexity_score\n";
    for (const RankingPoint& point : points) {
        out += point.attack + ',' + fmt_double(point.efficiency_db) + ',' +
               std::to_string(point.complexity) + '\n';
    }
    return out;
}

}  // namespace nrthreat
