// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "nrthreat/errors.hpp"

namespace nrthreat {

using Complex = std::complex<double>;

inline constexpr double kQpskAmplitude = std::numbers::sqrt2 / 2.0;

// Gray-mapped QPSK at unit average symbol power: bit pair (b0, b1) maps to
// ((1-2*b0) + j(1-2*b1)) / sqrt(2).
inline std::vector<Complex> qpsk_modulate(std::span<const std::uint8_t> bits) {
    if (bits.size() % 2 != 0) {
        throw OddLength("QPSK needs an even number of bits");
    }
    std::vector<Complex> symbols;
    symbols.reserve(bits.size() / 2);
    for (std::size_t i = 0; i < bits.size(); i += 2) {
        symbols.emplace_back(kQpskAmplitude * (1 - 2 * int(bits[i])),
                             kQpskAmplitude * (1 - 2 * int(bits[i + 1])));
    }
    return symbols;
}

inline std::vector<std::uint8_t> qpsk_hard_demodulate(std::span<const Complex> symbols) {
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * 2);
    for (const Complex& s : symbols) {
        bits.push_back(s.real() < 0.0 ? 1 : 0);
        bits.push_back(s.imag() < 0.0 ? 1 : 0);
    }
    return bits;
}

// Per-bit LLRs, positive for bit 0. noise_var is the total complex noise
// variance; each real dimension carries half of it.
inline std::vector<double> qpsk_llr(std::span<const Complex> symbols,
                                    double noise_var) {
    std::vector<double> llrs;
    llrs.reserve(symbols.size() * 2);
    const double scale = 2.0 * std::numbers::sqrt2 / noise_var;
    for (const Complex& s : symbols) {
        llrs.push_back(scale * s.real());
        llrs.push_back(scale * s.imag());
    }
    return llrs;
}

}  // namespace nrthreat
