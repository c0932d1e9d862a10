// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "nrthreat/csv.hpp"
#include "nrthreat/grid.hpp"

namespace nrthreat {

// Full label matrix as CSV: header row of subcarrier indices, then one row
// of label strings per OFDM symbol.
inline std::string occupancy_csv(const ResourceGrid& grid) {
    const auto& dims = grid.dims();
    std::string out;
    out.reserve(static_cast<std::size_t>(dims.res_per_frame) * 6);
    for (int sc = 0; sc < dims.subcarriers; ++sc) {
        if (sc > 0) out += ',';
        out += std::to_string(sc);
    }
    out += '\n';
    for (int symbol = 0; symbol < dims.symbols_per_frame; ++symbol) {
        for (int sc = 0; sc < dims.subcarriers; ++sc) {
            if (sc > 0) out += ',';
            out += to_string(grid.at(symbol, sc));
        }
        out += '\n';
    }
    return out;
}

// Compact lossless form: dimensions, label legend, and run-length-encoded
// labels in row-major (symbol-major) order.
inline nlohmann::json occupancy_json(const ResourceGrid& grid) {
    const auto& dims = grid.dims();
    nlohmann::json legend = nlohmann::json::array();
    for (ChannelKind kind : kAllChannelKinds) legend.push_back(to_string(kind));

    nlohmann::json rle = nlohmann::json::array();
    const auto& labels = grid.labels();
    std::size_t i = 0;
    while (i < labels.size()) {
        std::size_t run = 1;
        while (i + run < labels.size() && labels[i + run] == labels[i]) ++run;
        rle.push_back({static_cast<int>(labels[i]), run});
        i += run;
    }

    return nlohmann::json{
        {"direction",
         grid.direction() == Direction::downlink ? "downlink" : "uplink"},
        {"dims",
         {{"subcarriers", dims.subcarriers},
          {"symbols_per_frame", dims.symbols_per_frame},
          {"slots_per_frame", dims.slots_per_frame},
          {"res_per_frame", dims.res_per_frame}}},
        {"legend", legend},
        {"rle", rle},
    };
}

// Reconstructs the label matrix from occupancy_json output.
inline std::vector<ChannelKind> labels_from_occupancy_json(const nlohmann::json& doc) {
    const auto& dims = doc.at("dims");
    const long expected = dims.at("res_per_frame").get<long>();
    const auto& legend = doc.at("legend");

    std::vector<ChannelKind> labels;
    labels.reserve(static_cast<std::size_t>(expected));
    for (const auto& entry : doc.at("rle")) {
        const ChannelKind kind =
            channel_kind_from_string(legend.at(entry.at(0).get<std::size_t>())
                                         .get<std::string>());
        const std::size_t run = entry.at(1).get<std::size_t>();
        labels.insert(labels.end(), run, kind);
    }
    if (static_cast<long>(labels.size()) != expected) {
        throw ConfigError("occupancy RLE does not cover the stated grid size");
    }
    return labels;
}

// Per-channel RE counts and frame fractions. The PBCH row uses the whole
// PBCH region including its DM-RS pilots; the DM-RS row repeats the pilot
// share on its own.
inline std::string sparsity_csv(const ResourceGrid& grid) {
    static constexpr std::array<ChannelKind, 7> kDownlinkRows{
        ChannelKind::PSS,       ChannelKind::SSS,   ChannelKind::PBCH,
        ChannelKind::PBCH_DMRS, ChannelKind::PDCCH, ChannelKind::PDSCH,
        ChannelKind::UNUSED,
    };
    static constexpr std::array<ChannelKind, 3> kUplinkRows{
        ChannelKind::PUCCH,
        ChannelKind::PRACH,
        ChannelKind::PUSCH,
    };

    std::string out = "channel,re_count,fraction\n";
    const auto emit = [&](ChannelKind kind) {
        long count = grid.count(kind);
        if (kind == ChannelKind::PBCH) count += grid.count(ChannelKind::PBCH_DMRS);
        out += std::string(to_string(kind)) + ',' + std::to_string(count) + ',' +
               fmt_double(static_cast<double>(count) / grid.dims().res_per_frame) +
               '\n';
    };
    if (grid.direction() == Direction::downlink) {
        for (ChannelKind kind : kDownlinkRows) emit(kind);
    } else {
        for (ChannelKind kind : kUplinkRows) emit(kind);
    }
    return out;
}

}  // namespace nrthreat
