// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "nrthreat/errors.hpp"

namespace nrthreat {

// Polar code with a Bhattacharyya-ranked frozen set.
struct PolarCode {
    int block_len;
    int info_len;
    std::vector<std::uint8_t> frozen;   // 1 = frozen, indexed by u position
    std::vector<int> info_positions;    // ascending

    double rate() const { return double(info_len) / block_len; }

    // Ranks synthetic channels by the Bhattacharyya parameter evolved from
    // z0 = exp(-Es/N0) at the design SNR and unfreezes the best info_len.
    static PolarCode construct(int block_len, int info_len,
                               double design_snr_db = 0.0) {
        if (block_len <= 0 || !std::has_single_bit(unsigned(block_len))) {
            throw SizeMismatch("polar block length must be a power of two");
        }
        if (info_len < 0 || info_len >= block_len) {
            throw SizeMismatch("polar info length must satisfy 0 <= k < n");
        }
        const int stages = std::bit_width(unsigned(block_len)) - 1;
        const double z0 = std::exp(-std::pow(10.0, design_snr_db / 10.0));

        std::vector<std::pair<double, int>> ranked(static_cast<std::size_t>(block_len));
        for (int j = 0; j < block_len; ++j) {
            double z = z0;
            for (int bit = stages - 1; bit >= 0; --bit) {
                z = ((j >> bit) & 1) ? z * z : 2.0 * z - z * z;
            }
            ranked[size_t(j)] = {z, j};
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

        PolarCode code{block_len, info_len,
                       std::vector<std::uint8_t>(size_t(block_len), 1), {}};
        code.info_positions.reserve(size_t(info_len));
        for (int i = 0; i < info_len; ++i) {
            code.frozen[size_t(ranked[size_t(i)].second)] = 0;
            code.info_positions.push_back(ranked[size_t(i)].second);
        }
        std::sort(code.info_positions.begin(), code.info_positions.end());
        return code;
    }
};

inline std::vector<std::uint8_t> polar_encode(std::span<const std::uint8_t> info_bits,
                                              const PolarCode& code) {
    if (int(info_bits.size()) != code.info_len) {
        throw SizeMismatch("expected " + std::to_string(code.info_len) +
                           " info bits, got " + std::to_string(info_bits.size()));
    }
    std::vector<std::uint8_t> x(size_t(code.block_len), 0);
    for (int i = 0; i < code.info_len; ++i) {
        x[size_t(code.info_positions[size_t(i)])] = info_bits[size_t(i)];
    }
    for (int half = 1; half < code.block_len; half <<= 1) {
        for (int block = 0; block < code.block_len; block += 2 * half) {
            for (int j = block; j < block + half; ++j) {
                x[size_t(j)] ^= x[size_t(j + half)];
            }
        }
    }
    return x;
}

namespace detail {

// Min-sum check-node update.
inline double polar_f(double a, double b) {
    const double sign = ((a < 0) != (b < 0)) ? -1.0 : 1.0;
    return sign * std::min(std::abs(a), std::abs(b));
}

inline void sc_recurse(std::span<double> llr, std::span<const std::uint8_t> frozen,
                       std::span<std::uint8_t> u_out, std::span<std::uint8_t> x_out) {
    const std::size_t len = llr.size();
    if (len == 1) {
        const std::uint8_t bit = frozen[0] ? 0 : (llr[0] < 0.0 ? 1 : 0);
        u_out[0] = bit;
        x_out[0] = bit;
        return;
    }
    const std::size_t half = len / 2;
    std::vector<double> branch(half);
    std::vector<std::uint8_t> x_left(half), x_right(half);

    for (std::size_t i = 0; i < half; ++i) {
        branch[i] = polar_f(llr[i], llr[i + half]);
    }
    sc_recurse(branch, frozen.first(half), u_out.first(half), x_left);

    for (std::size_t i = 0; i < half; ++i) {
        branch[i] = llr[i + half] + (x_left[i] ? -llr[i] : llr[i]);
    }
    sc_recurse(branch, frozen.subspan(half), u_out.subspan(half), x_right);

    for (std::size_t i = 0; i < half; ++i) {
        x_out[i] = x_left[i] ^ x_right[i];
        x_out[i + half] = x_right[i];
    }
}

}  // namespace detail

// Successive-cancellation decoding. LLRs are positive for bit 0; uniform
// scaling of the input does not change the decisions.
inline std::vector<std::uint8_t> polar_decode_sc(std::span<const double> llrs,
                                                 const PolarCode& code) {
    if (int(llrs.size()) != code.block_len) {
        throw SizeMismatch("expected " + std::to_string(code.block_len) +
                           " LLRs, got " + std::to_string(llrs.size()));
    }
    std::vector<double> llr(llrs.begin(), llrs.end());
    std::vector<std::uint8_t> u(static_cast<std::size_t>(code.block_len));
    std::vector<std::uint8_t> x(static_cast<std::size_t>(code.block_len));
    detail::sc_recurse(llr, code.frozen, u, x);

    std::vector<std::uint8_t> info;
    info.reserve(size_t(code.info_len));
    for (int pos : code.info_positions) info.push_back(u[size_t(pos)]);
    return info;
}

}  // namespace nrthreat
