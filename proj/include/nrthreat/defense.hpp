// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nrthreat/errors.hpp"
#include "nrthreat/linksim.hpp"
#include "nrthreat/numerology.hpp"
#include "nrthreat/rng.hpp"

namespace nrthreat {

// One detectable PSS transmission as seen by the searching UE.
struct CellBeacon {
    int n_id_2 = 0;
    std::optional<int> n_id_1;
    double rx_power_db = 0.0;
    double timing_offset_ms = 0.0;
    bool has_valid_sss = true;
    bool mib_decodable = true;
    bool legitimate = true;
};

struct AttackerModel {
    int n_fake_pss = 0;
    // Relative to the strongest legitimate cell.
    double power_offset_db = 6.0;
    // Fresh sequence and timing every frame, defeating identity blacklists.
    bool rotate_each_frame = false;
    double period_ms = 20.0;
    // When set, fakes carry a valid SSS and fail at the MIB timer instead.
    bool spoofs_sss = false;
};

// Candidate identity for blacklisting: sequence id plus a coarse timing
// bucket (one slot by default).
struct BlacklistKey {
    int n_id_2;
    long timing_bucket;
    auto operator<=>(const BlacklistKey&) const = default;
};

class BlacklistState {
public:
    explicit BlacklistState(double decay_ms = 1000.0, double bucket_width_ms = 0.5)
        : decay_ms_(decay_ms), bucket_width_ms_(bucket_width_ms) {}

    double now_ms() const { return now_ms_; }
    double decay_ms() const { return decay_ms_; }
    std::size_t size() const { return entries_.size(); }

    void advance(double dt_ms) {
        if (dt_ms < 0.0) throw ClockRegression("simulated clock moved backwards");
        now_ms_ += dt_ms;
        purge();
    }

    // Re-inserting an existing identity refreshes its expiry.
    void mark_failed(int n_id_2, double timing_offset_ms) {
        entries_[key_for(n_id_2, timing_offset_ms)] = now_ms_ + decay_ms_;
    }

    bool contains(int n_id_2, double timing_offset_ms) {
        purge();
        return entries_.count(key_for(n_id_2, timing_offset_ms)) > 0;
    }

    void purge() {
        for (auto it = entries_.begin(); it != entries_.end();) {
            if (it->second <= now_ms_) {
                it = entries_.erase(it);
            } else {
                ++it;
            }
        }
    }

private:
    BlacklistKey key_for(int n_id_2, double timing_offset_ms) const {
        return {n_id_2,
                static_cast<long>(std::floor(timing_offset_ms / bucket_width_ms_))};
    }

    double decay_ms_;
    double bucket_width_ms_;
    double now_ms_ = 0.0;
    std::map<BlacklistKey, double> entries_;
};

struct CandidateFailed {
    int n_id_2;
    double timing_offset_ms;
};
struct TimeAdvance {
    double dt_ms;
};
using BlacklistEvent = std::variant<CandidateFailed, TimeAdvance>;

inline BlacklistState blacklist_step(BlacklistState state, const BlacklistEvent& event) {
    if (const auto* failed = std::get_if<CandidateFailed>(&event)) {
        state.mark_failed(failed->n_id_2, failed->timing_offset_ms);
    } else {
        state.advance(std::get<TimeAdvance>(event).dt_ms);
    }
    return state;
}

struct SearchConfig {
    double sss_timer_ms = 20.0;
    double mib_timer_ms = 80.0;
    int max_iterations = 50;
    bool mitigation_enabled = true;
    double blacklist_decay_ms = 1000.0;
    double blacklist_bucket_ms = 0.5;
};

inline void validate(const SearchConfig& config) {
    if (config.sss_timer_ms <= 0.0 || config.mib_timer_ms <= 0.0) {
        throw ConfigConflict("search timers must be positive");
    }
    if (config.max_iterations < 1) {
        throw ConfigConflict("max_iterations must be at least 1");
    }
}

struct SearchOutcome {
    bool camped = false;
    bool camped_legitimate = false;
    int iterations = 0;
    double elapsed_ms = 0.0;
    std::size_t blacklist_size = 0;
    std::size_t peak_blacklist_size = 0;

    bool success() const { return camped && camped_legitimate; }
};

namespace detail {

// Fake PSS transmissions are asynchronous to the real ones: timing draws
// that land in a legitimate beacon's slot bucket are rejected.
inline std::vector<CellBeacon> fake_beacons(const AttackerModel& attacker,
                                            double strongest_legit_db,
                                            std::span<const CellBeacon> environment,
                                            double bucket_ms,
                                            std::uint64_t fake_seed, long frame) {
    std::vector<CellBeacon> fakes;
    if (attacker.n_fake_pss <= 0) return fakes;
    Rng rng = make_trial_rng(fake_seed,
                             attacker.rotate_each_frame ? std::uint64_t(frame) : 0u);
    std::uniform_int_distribution<int> pick_id(0, 2);
    std::uniform_real_distribution<double> pick_timing(0.0, kFrameMs);
    const auto overlaps_real = [&](double timing_ms) {
        for (const CellBeacon& beacon : environment) {
            if (std::floor(timing_ms / bucket_ms) ==
                std::floor(beacon.timing_offset_ms / bucket_ms)) {
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < attacker.n_fake_pss; ++i) {
        CellBeacon fake;
        fake.n_id_2 = pick_id(rng);
        fake.rx_power_db = strongest_legit_db + attacker.power_offset_db;
        double timing = pick_timing(rng);
        for (int tries = 0; tries < 64 && overlaps_real(timing); ++tries) {
            timing = pick_timing(rng);
        }
        fake.timing_offset_ms = timing;
        fake.has_valid_sss = attacker.spoofs_sss;
        fake.mib_decodable = false;
        fake.legitimate = false;
        fakes.push_back(fake);
    }
    return fakes;
}

}  // namespace detail

// Initial cell search against a set of beacons plus an attacker. The UE
// repeatedly evaluates the strongest visible PSS candidate. Without
// mitigation it keeps retrying the strongest one (the standard leaves this
// behavior open; this is the naive model). With mitigation a candidate that
// fails the SSS or MIB timer is blacklisted and the next strongest is tried.
inline SearchOutcome cell_search(std::span<const CellBeacon> environment,
                                 const AttackerModel& attacker,
                                 const SearchConfig& config, std::uint64_t seed) {
    validate(config);
    if (environment.empty() && attacker.n_fake_pss == 0) {
        throw EmptyEnvironment("no beacons and no attacker");
    }

    double strongest_legit = 0.0;
    bool have_legit = false;
    for (const CellBeacon& beacon : environment) {
        if (!have_legit || beacon.rx_power_db > strongest_legit) {
            strongest_legit = beacon.rx_power_db;
            have_legit = true;
        }
    }

    BlacklistState blacklist(config.blacklist_decay_ms, config.blacklist_bucket_ms);
    SearchOutcome outcome;
    const std::uint64_t fake_seed = derive_seed(seed, 0xFA4Eu);

    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        outcome.iterations = iteration;
        const long frame = static_cast<long>(blacklist.now_ms() / kFrameMs);
        std::vector<CellBeacon> candidates(environment.begin(), environment.end());
        const auto fakes =
            detail::fake_beacons(attacker, strongest_legit, environment,
                                 config.blacklist_bucket_ms, fake_seed, frame);
        candidates.insert(candidates.end(), fakes.begin(), fakes.end());

        const CellBeacon* best = nullptr;
        for (const CellBeacon& candidate : candidates) {
            if (config.mitigation_enabled &&
                blacklist.contains(candidate.n_id_2, candidate.timing_offset_ms)) {
                continue;
            }
            if (!best || candidate.rx_power_db > best->rx_power_db ||
                (candidate.rx_power_db == best->rx_power_db &&
                 candidate.timing_offset_ms < best->timing_offset_ms)) {
                best = &candidate;
            }
        }

        if (!best) {
            // Everything visible is blacklisted; keep scanning.
            blacklist.advance(config.sss_timer_ms);
            outcome.elapsed_ms = blacklist.now_ms();
            continue;
        }

        if (!best->has_valid_sss) {
            blacklist.advance(config.sss_timer_ms);
            if (config.mitigation_enabled) {
                blacklist.mark_failed(best->n_id_2, best->timing_offset_ms);
            }
        } else if (!best->mib_decodable) {
            blacklist.advance(config.mib_timer_ms);
            if (config.mitigation_enabled) {
                blacklist.mark_failed(best->n_id_2, best->timing_offset_ms);
            }
        } else {
            outcome.camped = true;
            outcome.camped_legitimate = best->legitimate;
            outcome.elapsed_ms = blacklist.now_ms();
            outcome.blacklist_size = blacklist.size();
            return outcome;
        }
        outcome.peak_blacklist_size =
            std::max(outcome.peak_blacklist_size, blacklist.size());
        outcome.elapsed_ms = blacklist.now_ms();
    }
    outcome.blacklist_size = blacklist.size();
    return outcome;
}

// Per-trial randomization of the legitimate environment.
struct ScenarioRandomization {
    int legit_cells = 1;
    double power_window_low_db = -5.0;
    double power_window_high_db = 0.0;
};

// Fraction of randomized trials that end in denial of service.
inline SimResult simulate_dos_probability(const AttackerModel& attacker,
                                          const SearchConfig& config,
                                          const ScenarioRandomization& randomization,
                                          long trials, std::uint64_t seed) {
    validate(config);
    if (trials < 1) throw ConfigConflict("trials must be at least 1");
    if (randomization.power_window_low_db > randomization.power_window_high_db) {
        throw ConfigConflict("power window bounds are reversed");
    }

    long dos_count = 0;
    for (long trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(seed, std::uint64_t(trial));
        Rng env_rng(derive_seed(trial_seed, 0));
        std::uniform_real_distribution<double> pick_power(
            randomization.power_window_low_db, randomization.power_window_high_db);
        std::uniform_real_distribution<double> pick_timing(0.0, kFrameMs);
        std::uniform_int_distribution<int> pick_id2(0, 2);
        std::uniform_int_distribution<int> pick_id1(0, 335);

        std::vector<CellBeacon> environment;
        for (int cell = 0; cell < randomization.legit_cells; ++cell) {
            CellBeacon beacon;
            beacon.n_id_2 = pick_id2(env_rng);
            beacon.n_id_1 = pick_id1(env_rng);
            beacon.rx_power_db = pick_power(env_rng);
            beacon.timing_offset_ms = pick_timing(env_rng);
            environment.push_back(beacon);
        }

        const SearchOutcome outcome =
            cell_search(environment, attacker, config, derive_seed(trial_seed, 1));
        if (!outcome.success()) ++dos_count;
    }
    return make_rate_result(dos_count, trials, seed,
                            double(dos_count) / double(trials));
}

}  // namespace nrthreat
