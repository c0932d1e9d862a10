// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nrthreat/csv.hpp"
#include "nrthreat/errors.hpp"
#include "nrthreat/rng.hpp"

namespace nrthreat {

inline constexpr int kSyncSequenceLength = 127;
inline constexpr int kNumPss = 3;
inline constexpr int kNumNId1 = 336;
inline constexpr int kNumCellIds = 1008;
// PSS variants are cyclic shifts of one base m-sequence by this stride.
inline constexpr int kPssShiftPerId = 43;

using Complex = std::complex<double>;

struct CellId {
    int n_id_1;
    int n_id_2;

    CellId(int id1, int id2) : n_id_1(id1), n_id_2(id2) {
        if (id1 < 0 || id1 >= kNumNId1 || id2 < 0 || id2 >= kNumPss) {
            throw InvalidId("cell identity (" + std::to_string(id1) + ", " +
                            std::to_string(id2) + ") out of range");
        }
    }

    static CellId from_cell_id(int cell_id) {
        if (cell_id < 0 || cell_id >= kNumCellIds) {
            throw InvalidId("cell id " + std::to_string(cell_id) + " out of range");
        }
        return CellId(cell_id / 3, cell_id % 3);
    }

    int cell_id() const { return 3 * n_id_1 + n_id_2; }
};

struct SyncSequence {
    enum class Kind { pss, sss };
    Kind kind;
    std::array<std::int8_t, kSyncSequenceLength> chips;
};

struct ZcSequence {
    int root;
    int length;
    std::vector<Complex> samples;
};

namespace detail {

// Length-127 binary m-sequence from the degree-7 recurrence
// x(i+7) = x(i+tap) + x(i), with the given 7-bit seed x(0..6).
inline std::array<std::uint8_t, kSyncSequenceLength> msequence7(
    int tap, const std::array<std::uint8_t, 7>& seed) {
    std::array<std::uint8_t, kSyncSequenceLength> x{};
    for (int i = 0; i < 7; ++i) x[static_cast<std::size_t>(i)] = seed[static_cast<std::size_t>(i)];
    for (int i = 0; i + 7 < kSyncSequenceLength; ++i) {
        x[static_cast<std::size_t>(i + 7)] =
            static_cast<std::uint8_t>((x[static_cast<std::size_t>(i + tap)] + x[static_cast<std::size_t>(i)]) % 2);
    }
    return x;
}

}  // namespace detail

// Primary synchronization sequence: BPSK m-sequence, cyclically shifted by
// 43 positions per identity.
inline SyncSequence gen_pss(int n_id_2) {
    if (n_id_2 < 0 || n_id_2 >= kNumPss) {
        throw InvalidId("n_id_2 must be 0, 1, or 2");
    }
    static const auto x = detail::msequence7(4, {0, 1, 1, 0, 1, 1, 1});
    SyncSequence seq{SyncSequence::Kind::pss, {}};
    for (int n = 0; n < kSyncSequenceLength; ++n) {
        const int m = (n + kPssShiftPerId * n_id_2) % kSyncSequenceLength;
        seq.chips[static_cast<std::size_t>(n)] =
            static_cast<std::int8_t>(1 - 2 * x[static_cast<std::size_t>(m)]);
    }
    return seq;
}

// Secondary synchronization sequence: product of two shifted m-sequences
// (Gold family), one sequence per physical cell identity.
inline SyncSequence gen_sss(const CellId& id) {
    static const auto x0 = detail::msequence7(4, {1, 0, 0, 0, 0, 0, 0});
    static const auto x1 = detail::msequence7(1, {1, 0, 0, 0, 0, 0, 0});
    const int m0 = 15 * (id.n_id_1 / 112) + 5 * id.n_id_2;
    const int m1 = id.n_id_1 % 112;
    SyncSequence seq{SyncSequence::Kind::sss, {}};
    for (int n = 0; n < kSyncSequenceLength; ++n) {
        const int a = 1 - 2 * x0[static_cast<std::size_t>((n + m0) % kSyncSequenceLength)];
        const int b = 1 - 2 * x1[static_cast<std::size_t>((n + m1) % kSyncSequenceLength)];
        seq.chips[static_cast<std::size_t>(n)] = static_cast<std::int8_t>(a * b);
    }
    return seq;
}

inline ZcSequence gen_zadoff_chu(int root, int length) {
    if (length <= 0 || length % 2 == 0) {
        throw InvalidRoot("Zadoff-Chu length must be odd and positive");
    }
    if (root <= 0 || std::gcd(root, length) != 1) {
        throw InvalidRoot("Zadoff-Chu root must be positive and coprime to the length");
    }
    ZcSequence seq{root, length, {}};
    seq.samples.reserve(static_cast<std::size_t>(length));
    for (int n = 0; n < length; ++n) {
        const double phase = -std::numbers::pi * root * static_cast<double>(n) *
                             (n + 1) / length;
        seq.samples.emplace_back(std::cos(phase), std::sin(phase));
    }
    return seq;
}

inline std::vector<Complex> to_complex(const SyncSequence& seq) {
    std::vector<Complex> out;
    out.reserve(seq.chips.size());
    for (std::int8_t chip : seq.chips) out.emplace_back(chip, 0.0);
    return out;
}

// Magnitude of the circular cross-correlation at every lag, normalized by
// the sequence length: out[lag] = |sum_n a[n] * conj(b[(n+lag) mod N])| / N.
inline std::vector<double> periodic_xcorr(std::span<const Complex> a,
                                          std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw LengthMismatch("periodic_xcorr requires equal lengths");
    }
    const std::size_t n = a.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t lag = 0; lag < n; ++lag) {
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            acc += a[i] * std::conj(b[(i + lag) % n]);
        }
        out[lag] = std::abs(acc) / static_cast<double>(n);
    }
    return out;
}

struct PssCandidate {
    int n_id_2;
    long lag;
    double metric;
};

namespace detail {

// Calls fn(n_id_2, lag, metric) for the normalized matched-filter metric of
// every PSS hypothesis against every circular lag of the received vector.
// The metric is |corr| / (||pss|| * ||window||), invariant to input scaling.
template <typename Fn>
void scan_pss_metrics(std::span<const Complex> received, Fn&& fn) {
    const long len = static_cast<long>(received.size());
    if (len < kSyncSequenceLength) {
        throw TooShort("received vector shorter than one sync sequence");
    }

    // Doubled buffer turns circular windows into contiguous ones.
    std::vector<Complex> ext(received.begin(), received.end());
    ext.insert(ext.end(), received.begin(),
               received.begin() + kSyncSequenceLength);
    std::vector<double> energy_prefix(ext.size() + 1, 0.0);
    for (std::size_t i = 0; i < ext.size(); ++i) {
        energy_prefix[i + 1] = energy_prefix[i] + std::norm(ext[i]);
    }

    const double pss_norm = std::sqrt(static_cast<double>(kSyncSequenceLength));
    for (int id = 0; id < kNumPss; ++id) {
        const SyncSequence pss = gen_pss(id);
        for (long lag = 0; lag < len; ++lag) {
            Complex acc{0.0, 0.0};
            const Complex* window = ext.data() + lag;
            for (int i = 0; i < kSyncSequenceLength; ++i) {
                if (pss.chips[static_cast<std::size_t>(i)] > 0) {
                    acc += window[i];
                } else {
                    acc -= window[i];
                }
            }
            const double window_energy =
                energy_prefix[static_cast<std::size_t>(lag) + kSyncSequenceLength] -
                energy_prefix[static_cast<std::size_t>(lag)];
            const double metric =
                window_energy > 0.0
                    ? std::abs(acc) / (pss_norm * std::sqrt(window_energy))
                    : 0.0;
            fn(id, lag, metric);
        }
    }
}

}  // namespace detail

// PSS hypotheses whose metric exceeds the threshold at a local lag maximum,
// strongest first.
inline std::vector<PssCandidate> detect_pss(std::span<const Complex> received,
                                            double fa_threshold) {
    const long len = static_cast<long>(received.size());
    std::vector<std::vector<double>> metrics(
        kNumPss, std::vector<double>(static_cast<std::size_t>(len), 0.0));
    detail::scan_pss_metrics(received, [&](int id, long lag, double metric) {
        metrics[static_cast<std::size_t>(id)][static_cast<std::size_t>(lag)] = metric;
    });

    std::vector<PssCandidate> candidates;
    for (int id = 0; id < kNumPss; ++id) {
        const auto& m = metrics[static_cast<std::size_t>(id)];
        for (long lag = 0; lag < len; ++lag) {
            const double here = m[static_cast<std::size_t>(lag)];
            if (here <= fa_threshold) continue;
            const double prev = m[static_cast<std::size_t>((lag + len - 1) % len)];
            const double next = m[static_cast<std::size_t>((lag + 1) % len)];
            if (here >= prev && here >= next) {
                candidates.push_back({id, lag, here});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const PssCandidate& a, const PssCandidate& b) {
                  if (a.metric != b.metric) return a.metric > b.metric;
                  if (a.n_id_2 != b.n_id_2) return a.n_id_2 < b.n_id_2;
                  return a.lag < b.lag;
              });
    return candidates;
}

// Detection threshold as the empirical (1 - fa_prob) quantile of the
// noise-only peak metric at this window length.
inline double calibrate_pss_threshold(int window_len, double fa_prob, int trials,
                                      std::uint64_t seed) {
    if (window_len < kSyncSequenceLength) {
        throw TooShort("window shorter than one sync sequence");
    }
    std::vector<double> peaks;
    peaks.reserve(static_cast<std::size_t>(trials));
    std::normal_distribution<double> gauss(0.0, std::numbers::sqrt2 / 2.0);
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = make_trial_rng(seed, static_cast<std::uint64_t>(trial));
        std::vector<Complex> noise(static_cast<std::size_t>(window_len));
        for (auto& sample : noise) sample = {gauss(rng), gauss(rng)};
        double peak = 0.0;
        detail::scan_pss_metrics(noise, [&](int, long, double metric) {
            peak = std::max(peak, metric);
        });
        peaks.push_back(peak);
    }
    std::sort(peaks.begin(), peaks.end());
    const auto quantile = static_cast<std::size_t>(std::min<double>(
        static_cast<double>(trials) - 1,
        std::ceil((1.0 - fa_prob) * static_cast<double>(trials)) - 1));
    return peaks[quantile];
}

inline std::string sequence_csv(const SyncSequence& seq) {
    std::string out = "index,value\n";
    for (std::size_t i = 0; i < seq.chips.size(); ++i) {
        out += std::to_string(i) + ',' + std::to_string(int(seq.chips[i])) + '\n';
    }
    return out;
}

inline std::string sequence_csv(const ZcSequence& seq) {
    std::string out = "index,re,im\n";
    for (std::size_t i = 0; i < seq.samples.size(); ++i) {
        out += std::to_string(i) + ',' + fmt_double(seq.samples[i].real()) + ',' +
               fmt_double(seq.samples[i].imag()) + '\n';
    }
    return out;
}

}  // namespace nrthreat
