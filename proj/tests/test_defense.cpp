// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch.hpp>

#include <limits>

#include "nrthreat/defense.hpp"

using namespace nrthreat;

namespace {

CellBeacon legit_cell(double power_db = 0.0) {
    CellBeacon beacon;
    beacon.n_id_2 = 1;
    beacon.n_id_1 = 42;
    beacon.rx_power_db = power_db;
    beacon.timing_offset_ms = 3.25;
    return beacon;
}

AttackerModel spoofer(int fakes, double offset_db, bool rotate = false) {
    AttackerModel attacker;
    attacker.n_fake_pss = fakes;
    attacker.power_offset_db = offset_db;
    attacker.rotate_each_frame = rotate;
    return attacker;
}

}  // namespace

TEST_CASE("blacklist entries expire after the decay interval", "[defense]") {
    BlacklistState state(100.0);
    state.mark_failed(1, 2.0);
    CHECK(state.size() == 1);
    CHECK(state.contains(1, 2.0));

    state = blacklist_step(state, TimeAdvance{101.0});
    CHECK(state.size() == 0);
    CHECK_FALSE(state.contains(1, 2.0));

    // Double insertion keeps set semantics and refreshes expiry.
    state = blacklist_step(state, CandidateFailed{2, 4.0});
    state = blacklist_step(state, CandidateFailed{2, 4.0});
    state = blacklist_step(state, TimeAdvance{99.0});
    CHECK(state.size() == 1);

    CHECK_THROWS_AS(state.advance(-1.0), ClockRegression);
}

TEST_CASE("blacklist identity uses sequence id and timing bucket", "[defense]") {
    BlacklistState state(1000.0, 0.5);
    state.mark_failed(0, 1.2);
    CHECK(state.contains(0, 1.3));        // same half-millisecond bucket
    CHECK_FALSE(state.contains(0, 1.6));  // next bucket
    CHECK_FALSE(state.contains(1, 1.2));  // different sequence
}

TEST_CASE("rotating insertions settle at arrival rate times lifetime", "[defense]") {
    // 1000 inserts of distinct rolling identities, one per 10 ms frame, with
    // a 100 ms decay: steady state holds the last ~10 insertions.
    BlacklistState state(100.0, 0.5);
    std::size_t peak = 0;
    for (int i = 0; i < 1000; ++i) {
        state.mark_failed(i % 3, (i % 20) * 0.5 + 0.25);
        state.advance(10.0);
        peak = std::max(peak, state.size());
    }
    CHECK(state.size() >= 9);
    CHECK(state.size() <= 10);
    CHECK(peak <= 11);
}

TEST_CASE("cell search camps immediately without an attacker", "[defense]") {
    const std::vector<CellBeacon> env{legit_cell()};
    const SearchOutcome outcome = cell_search(env, AttackerModel{}, SearchConfig{}, 1);
    CHECK(outcome.success());
    CHECK(outcome.iterations == 1);

    CHECK_THROWS_AS(cell_search({}, AttackerModel{}, SearchConfig{}, 1),
                    EmptyEnvironment);
}

TEST_CASE("spoofing causes DoS without mitigation and is defeated with it",
          "[defense]") {
    const std::vector<CellBeacon> env{legit_cell()};
    const AttackerModel attacker = spoofer(3, 6.0);

    SearchConfig config;
    config.mitigation_enabled = false;
    const SearchOutcome unmitigated = cell_search(env, attacker, config, 2);
    CHECK_FALSE(unmitigated.success());
    CHECK(unmitigated.iterations == config.max_iterations);

    config.mitigation_enabled = true;
    const SearchOutcome mitigated = cell_search(env, attacker, config, 2);
    CHECK(mitigated.success());
    CHECK(mitigated.iterations <= attacker.n_fake_pss + 1);
}

TEST_CASE("SSS-spoofing fakes fail at the MIB timer instead", "[defense]") {
    const std::vector<CellBeacon> env{legit_cell()};
    AttackerModel attacker = spoofer(2, 6.0);
    attacker.spoofs_sss = true;

    SearchConfig config;
    const SearchOutcome outcome = cell_search(env, attacker, config, 3);
    CHECK(outcome.success());
    CHECK(outcome.iterations <= 3);
    // Two MIB-timer failures before camping.
    CHECK(outcome.elapsed_ms == Approx(2 * config.mib_timer_ms));
}

TEST_CASE("cell search is deterministic under a fixed seed", "[defense]") {
    const std::vector<CellBeacon> env{legit_cell()};
    const AttackerModel attacker = spoofer(3, 6.0, true);
    SearchConfig config;
    config.max_iterations = 20;

    const SearchOutcome a = cell_search(env, attacker, config, 7);
    const SearchOutcome b = cell_search(env, attacker, config, 7);
    CHECK(a.camped == b.camped);
    CHECK(a.iterations == b.iterations);
    CHECK(a.elapsed_ms == b.elapsed_ms);
    CHECK(a.peak_blacklist_size == b.peak_blacklist_size);
}

TEST_CASE("a rotating attacker defeats the blacklist but not its memory bound",
          "[defense]") {
    const std::vector<CellBeacon> env{legit_cell()};
    AttackerModel attacker = spoofer(3, 6.0, true);

    SearchConfig config;
    config.max_iterations = 500;  // 10 s of simulated time at 20 ms per failure
    config.blacklist_decay_ms = 100.0;
    const SearchOutcome bounded = cell_search(env, attacker, config, 5);
    CHECK_FALSE(bounded.success());
    // Steady state: one insertion per 20 ms failure, 100 ms lifetime.
    CHECK(bounded.peak_blacklist_size <= 8);

    // Without decay the list keeps growing until the rotating identities
    // saturate their own (sequence, slot-bucket) space.
    config.blacklist_decay_ms = std::numeric_limits<double>::infinity();
    const SearchOutcome unbounded = cell_search(env, attacker, config, 5);
    CHECK(unbounded.peak_blacklist_size >= 15);
    CHECK(unbounded.peak_blacklist_size >= 3 * bounded.peak_blacklist_size);
}

TEST_CASE("DoS probability separates mitigated and unmitigated arms", "[defense]") {
    const AttackerModel attacker = spoofer(3, 6.0);
    ScenarioRandomization randomization;

    SearchConfig off;
    off.mitigation_enabled = false;
    const SimResult p_off = simulate_dos_probability(attacker, off, randomization,
                                                     400, 11);
    SearchConfig on;
    on.mitigation_enabled = true;
    const SimResult p_on = simulate_dos_probability(attacker, on, randomization,
                                                    400, 11);

    CHECK(p_off.point_estimate >= 0.9);
    CHECK(p_on.point_estimate < p_off.point_estimate);
    CHECK(p_on.point_estimate + p_on.confidence_halfwidth_95 <
          p_off.point_estimate - p_off.confidence_halfwidth_95);
}

TEST_CASE("no attacker means no denial of service", "[defense]") {
    const AttackerModel none;
    for (bool mitigation : {false, true}) {
        SearchConfig config;
        config.mitigation_enabled = mitigation;
        const SimResult result =
            simulate_dos_probability(none, config, ScenarioRandomization{}, 200, 3);
        CHECK(result.point_estimate == 0.0);
    }
}

TEST_CASE("unmitigated DoS probability is monotone in the power offset", "[defense]") {
    SearchConfig config;
    config.mitigation_enabled = false;
    ScenarioRandomization randomization;

    double previous = -1.0;
    for (double offset : {-3.0, 0.5, 3.0, 6.0}) {
        const SimResult result = simulate_dos_probability(
            spoofer(2, offset), config, randomization, 300, 17);
        CHECK(result.point_estimate + result.confidence_halfwidth_95 + 0.02 >=
              previous);
        previous = result.point_estimate;
    }
}
