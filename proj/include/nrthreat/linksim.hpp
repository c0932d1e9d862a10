// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nrthreat/errors.hpp"
#include "nrthreat/grid.hpp"
#include "nrthreat/polar.hpp"
#include "nrthreat/qpsk.hpp"
#include "nrthreat/rng.hpp"
#include "nrthreat/sequences.hpp"

namespace nrthreat {

struct JammerSpec {
    enum class Kind { barrage, channel_selective, spoofing };
    Kind kind = Kind::channel_selective;
    double j_s_ch_db = 0.0;
    ChannelKind target = ChannelKind::PBCH;
    double duty_cycle = 1.0;
    bool synchronized = true;
};

inline void validate(const JammerSpec& jammer) {
    if (jammer.duty_cycle <= 0.0 || jammer.duty_cycle > 1.0) {
        throw ConfigConflict("jammer duty_cycle must lie in (0, 1]");
    }
    if (jammer.kind == JammerSpec::Kind::barrage && jammer.duty_cycle != 1.0) {
        throw ConfigConflict("barrage jamming implies duty_cycle 1");
    }
    if (jammer.kind == JammerSpec::Kind::spoofing &&
        jammer.target != ChannelKind::PSS) {
        throw ConfigConflict("spoofing targets the PSS only");
    }
}

struct PolarCodeSpec {
    int block_len = 256;
    int info_len = 85;  // rate ~ 1/3
    double design_snr_db = 0.0;
};

struct LinkConfig {
    double snr_db = 10.0;
    std::optional<PolarCodeSpec> code = PolarCodeSpec{};
    long trials = 1000;
    std::uint64_t seed = 1;
};

inline void validate(const LinkConfig& link) {
    if (link.trials < 1) throw ConfigConflict("trials must be at least 1");
    if (link.code && (link.code->info_len >= link.code->block_len ||
                      link.code->info_len < 0)) {
        throw ConfigConflict("polar info length must satisfy 0 <= k < n");
    }
}

// Monte-Carlo rate estimate with a normal-approximation 95% interval. The
// interval is flagged invalid below 20 observed failure events.
struct SimResult {
    double point_estimate = 0.0;
    double confidence_halfwidth_95 = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
    long events = 0;
    bool ci_valid = false;
};

inline SimResult make_rate_result(long failure_events, long trials,
                                  std::uint64_t seed, double estimate) {
    SimResult result;
    result.point_estimate = estimate;
    result.trials = trials;
    result.seed = seed;
    result.events = failure_events;
    result.confidence_halfwidth_95 =
        1.96 * std::sqrt(estimate * (1.0 - estimate) / double(trials));
    result.ci_valid = failure_events >= 20;
    return result;
}

// Additive circular Gaussian noise at snr_db (signal power taken as 1),
// plus independent Gaussian jamming at j_s_ch_db on targeted symbols only.
// Spoofing is not a noise process and is handled by the defense simulation.
inline std::vector<Complex> awgn_and_jam(std::span<const Complex> symbols,
                                         double snr_db,
                                         const std::optional<JammerSpec>& jammer,
                                         Rng& rng,
                                         std::vector<std::uint8_t>* jammed_mask = nullptr) {
    if (jammer) {
        validate(*jammer);
        if (jammer->kind == JammerSpec::Kind::spoofing) {
            throw ConfigConflict("spoofing has no noise model; use the defense simulation");
        }
    }
    const double noise_var = std::pow(10.0, -snr_db / 10.0);
    const double jam_var =
        jammer ? std::pow(10.0, jammer->j_s_ch_db / 10.0) : 0.0;
    const bool jamming = jammer && jam_var > 0.0;
    const bool jam_all =
        jamming && (jammer->kind == JammerSpec::Kind::barrage || jammer->duty_cycle >= 1.0);

    std::normal_distribution<double> noise(0.0, std::sqrt(noise_var / 2.0));
    std::normal_distribution<double> jam(0.0, jamming ? std::sqrt(jam_var / 2.0) : 1.0);
    std::bernoulli_distribution hit(jamming ? jammer->duty_cycle : 0.0);

    if (jammed_mask) jammed_mask->assign(symbols.size(), 0);
    std::vector<Complex> received;
    received.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        Complex sample = symbols[i] + Complex(noise(rng), noise(rng));
        if (jamming && (jam_all || hit(rng))) {
            sample += Complex(jam(rng), jam(rng));
            if (jammed_mask) (*jammed_mask)[i] = 1;
        }
        received.push_back(sample);
    }
    return received;
}

// Uncoded QPSK bit error rate over AWGN at the given Eb/N0.
inline SimResult simulate_qpsk_ber(double ebn0_db, long bits, std::uint64_t seed) {
    if (bits < 2 || bits % 2 != 0) {
        throw ConfigConflict("bit count must be even and positive");
    }
    const double esn0_db = ebn0_db + 10.0 * std::log10(2.0);  // 2 bits/symbol
    long errors = 0;
    const long chunk_bits = 1 << 16;
    long done = 0;
    std::uint64_t chunk_index = 0;
    while (done < bits) {
        const long now = std::min(chunk_bits, bits - done);
        Rng rng = make_trial_rng(seed, chunk_index++);
        std::bernoulli_distribution coin(0.5);
        std::vector<std::uint8_t> tx(static_cast<std::size_t>(now));
        for (auto& b : tx) b = coin(rng) ? 1 : 0;
        const auto symbols = qpsk_modulate(tx);
        const auto received = awgn_and_jam(symbols, esn0_db, std::nullopt, rng);
        const auto rx = qpsk_hard_demodulate(received);
        for (long i = 0; i < now; ++i) {
            if (tx[size_t(i)] != rx[size_t(i)]) ++errors;
        }
        done += now;
    }
    return make_rate_result(errors, bits, seed, double(errors) / double(bits));
}

// Block error rate of the configured polar code over QPSK/AWGN with an
// optional jammer on the simulated channel's REs. The receiver scales LLRs
// by the thermal noise variance only; it does not know which symbols were
// jammed.
inline SimResult simulate_bler(const LinkConfig& link,
                               const std::optional<JammerSpec>& jammer) {
    validate(link);
    if (!link.code) {
        throw ConfigConflict("BLER simulation requires a polar code");
    }
    const PolarCode code = PolarCode::construct(
        link.code->block_len, link.code->info_len, link.code->design_snr_db);
    const double noise_var = std::pow(10.0, -link.snr_db / 10.0);

    long errors = 0;
    for (long trial = 0; trial < link.trials; ++trial) {
        Rng rng = make_trial_rng(link.seed, std::uint64_t(trial));
        std::bernoulli_distribution coin(0.5);
        std::vector<std::uint8_t> info(static_cast<std::size_t>(code.info_len));
        for (auto& b : info) b = coin(rng) ? 1 : 0;

        const auto codeword = polar_encode(info, code);
        const auto symbols = qpsk_modulate(codeword);
        const auto received = awgn_and_jam(symbols, link.snr_db, jammer, rng);
        const auto llrs = qpsk_llr(received, noise_var);
        const auto decoded = polar_decode_sc(llrs, code);
        if (decoded != info) ++errors;
    }
    return make_rate_result(errors, link.trials, link.seed,
                            double(errors) / double(link.trials));
}

struct PssDetectionConfig {
    double snr_db = 10.0;
    int window_len = 512;
    double false_alarm_prob = 0.01;
    // Calibrated detection threshold; derived from false_alarm_prob when unset.
    std::optional<double> threshold;
    int calibration_trials = 2000;
};

// Probability that the true (n_id_2, lag) tops the candidate list when the
// PSS REs carry Gaussian jamming at j_s_ch_db. Jammer power is relative to
// the unit sync signal power; pass -inf to disable the jammer.
inline SimResult simulate_pss_detection(double j_s_ch_db, long trials,
                                        std::uint64_t seed,
                                        const PssDetectionConfig& config = {}) {
    if (trials < 1) throw ConfigConflict("trials must be at least 1");
    const double threshold =
        config.threshold
            ? *config.threshold
            : calibrate_pss_threshold(config.window_len, config.false_alarm_prob,
                                      config.calibration_trials,
                                      derive_seed(seed, 0x9e3779b9ULL));
    const double noise_var = std::pow(10.0, -config.snr_db / 10.0);
    const double jam_var =
        std::isinf(j_s_ch_db) && j_s_ch_db < 0 ? 0.0
                                               : std::pow(10.0, j_s_ch_db / 10.0);

    const long window = config.window_len;
    long detections = 0;
    for (long trial = 0; trial < trials; ++trial) {
        Rng rng = make_trial_rng(seed, std::uint64_t(trial));
        std::uniform_int_distribution<int> pick_id(0, kNumPss - 1);
        std::uniform_int_distribution<long> pick_lag(0, window - 1);
        std::normal_distribution<double> noise(0.0, std::sqrt(noise_var / 2.0));
        std::normal_distribution<double> jam(0.0, jam_var > 0.0 ? std::sqrt(jam_var / 2.0) : 1.0);

        const int true_id = pick_id(rng);
        const long true_lag = pick_lag(rng);
        const SyncSequence pss = gen_pss(true_id);

        std::vector<Complex> received(static_cast<std::size_t>(window));
        for (auto& sample : received) sample = {noise(rng), noise(rng)};
        for (int n = 0; n < kSyncSequenceLength; ++n) {
            auto& sample = received[size_t((true_lag + n) % window)];
            sample += Complex(pss.chips[size_t(n)], 0.0);
            if (jam_var > 0.0) sample += Complex(jam(rng), jam(rng));
        }

        const auto candidates = detect_pss(received, threshold);
        if (!candidates.empty() && candidates[0].n_id_2 == true_id &&
            candidates[0].lag == true_lag) {
            ++detections;
        }
    }
    return make_rate_result(trials - detections, trials, seed,
                            double(detections) / double(trials));
}

struct JsSweep {
    double from_db = -10.0;
    double to_db = 30.0;
    double step_db = 1.0;
};

// Smallest J/S_CH in the sweep at which the channel's failure metric (block
// error rate, or missed detection for sync signals) reaches 0.9.
inline double dos_threshold(ChannelKind channel, const LinkConfig& link,
                            const JsSweep& sweep = {},
                            const PssDetectionConfig& pss_config = {}) {
    validate(link);
    if (sweep.step_db <= 0.0 || sweep.to_db < sweep.from_db) {
        throw ConfigConflict("invalid J/S sweep bounds");
    }
    const bool coded = channel == ChannelKind::PBCH || channel == ChannelKind::PDCCH;
    const bool sync = channel == ChannelKind::PSS || channel == ChannelKind::SSS;
    if (!coded && !sync) {
        throw ConfigConflict(std::string("no DoS link model for channel ") +
                             std::string(to_string(channel)));
    }

    // Resolve the detector threshold once so every sweep point shares it.
    PssDetectionConfig pss = pss_config;
    if (sync && !pss.threshold) {
        pss.threshold = calibrate_pss_threshold(
            pss.window_len, pss.false_alarm_prob, pss.calibration_trials,
            derive_seed(link.seed, 0x9e3779b9ULL));
    }

    int index = 0;
    for (double js = sweep.from_db; js <= sweep.to_db + 1e-9;
         js += sweep.step_db, ++index) {
        const std::uint64_t point_seed = derive_seed(link.seed, std::uint64_t(index));
        double failure = 0.0;
        if (coded) {
            JammerSpec jammer;
            jammer.kind = JammerSpec::Kind::channel_selective;
            jammer.target = channel;
            jammer.j_s_ch_db = js;
            jammer.duty_cycle = 1.0;
            LinkConfig point = link;
            point.seed = point_seed;
            failure = simulate_bler(point, jammer).point_estimate;
        } else {
            failure = 1.0 - simulate_pss_detection(js, link.trials, point_seed, pss)
                                .point_estimate;
        }
        if (failure >= 0.9) return js;
    }
    throw NoThresholdInRange("failure metric never reached 0.9 in the J/S sweep");
}

}  // namespace nrthreat
