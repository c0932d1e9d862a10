// SPDX-License-Identifier: Apache-2.0
//
// nrthreat: 5G NR physical-layer jamming threat assessment toolkit.
//
// Subcommands:
//   grid      occupancy map and per-channel sparsity of one 10 ms frame
//   threat    threat table and efficiency/complexity ranking scatter
//   simulate  Monte-Carlo link sweeps (BER, BLER, PSS detection, DoS thresholds)
//   defend    cell-search DoS probability with and without mitigation
//
// Every run writes its artifacts plus a run_manifest.json into --out.
// Outputs are pure functions of (config file, seed); set SOURCE_DATE_EPOCH
// to pin the manifest timestamp for byte-identical reruns.

#include <cinttypes>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nrthreat/csv.hpp"
#include "nrthreat/defense.hpp"
#include "nrthreat/errors.hpp"
#include "nrthreat/grid.hpp"
#include "nrthreat/grid_io.hpp"
#include "nrthreat/linksim.hpp"
#include "nrthreat/threat.hpp"
#include "nrthreat/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nrthreat;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::int64_t> seed_override;
    std::optional<long> trials_override;
};

// ---------------------------------------------------------------------------
// Config loading and fail-closed validation

json load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config parse failure in " + path + ": " + e.what());
    }
    return doc;
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
    if (!obj.is_object()) {
        throw ConfigError(context + " must be a JSON object");
    }
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("unknown key \"" + item.key() + "\" in " + context);
        }
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
    }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& context) {
    if (!obj.contains(key)) {
        throw ConfigError("missing key \"" + std::string(key) + "\" in " + context);
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
    }
}

GridConfig parse_grid_config(const json& obj, bool allow_direction) {
    std::set<std::string> allowed = {
        "bw_mhz",           "scs_khz",
        "carrier_below_3ghz",
        "coreset_time_dur", "coreset_subcarrier_span",
        "ssb_blocks_per_frame", "ssb_subcarrier_offset",
        "pucch_fraction",   "prach_fraction"};
    if (allow_direction) allowed.insert("direction");
    check_keys(obj, allowed, "grid config");

    GridConfig config;
    config.bw_mhz = require<double>(obj, "bw_mhz", "grid config");
    config.scs_khz = require<int>(obj, "scs_khz", "grid config");
    config.carrier_below_3ghz = get_or(obj, "carrier_below_3ghz", true);
    if (allow_direction) {
        const std::string direction = get_or<std::string>(obj, "direction", "downlink");
        if (direction == "downlink") {
            config.direction = Direction::downlink;
        } else if (direction == "uplink") {
            config.direction = Direction::uplink;
        } else {
            throw ConfigError("direction must be \"downlink\" or \"uplink\"");
        }
    }
    config.coreset_time_dur = get_or(obj, "coreset_time_dur", 1);
    if (obj.contains("coreset_subcarrier_span")) {
        config.coreset_subcarrier_span = obj.at("coreset_subcarrier_span").get<int>();
    }
    config.ssb_blocks_per_frame = get_or(obj, "ssb_blocks_per_frame", 4);
    if (obj.contains("ssb_subcarrier_offset")) {
        config.ssb_subcarrier_offset = obj.at("ssb_subcarrier_offset").get<int>();
    }
    config.pucch_fraction = get_or(obj, "pucch_fraction", 0.10);
    config.prach_fraction = get_or(obj, "prach_fraction", 0.02);
    return config;
}

// ---------------------------------------------------------------------------
// Output helpers

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << contents;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string iso_timestamp() {
    std::time_t now = 0;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    } else {
        now = std::time(nullptr);
    }
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& config_path, std::uint64_t seed) {
    std::ifstream in(config_path, std::ios::binary);
    std::stringstream bytes;
    bytes << in.rdbuf();
    char digest[32];
    std::snprintf(digest, sizeof(digest), "%016" PRIx64, fnv1a64(bytes.str()));
    const json manifest = {
        {"command", command},
        {"config_digest_fnv1a64", digest},
        {"seed", seed},
        {"tool_version", kVersion},
        {"timestamp", iso_timestamp()},
    };
    write_file(out_dir / "run_manifest.json", manifest.dump(2) + "\n");
}

json result_record(const SimResult& result) {
    return json{{"estimate", result.point_estimate},
                {"ci_halfwidth_95", result.confidence_halfwidth_95},
                {"trials", result.trials},
                {"events", result.events},
                {"ci_valid", result.ci_valid},
                {"seed", result.seed}};
}

std::string result_csv_row(const SimResult& result) {
    return fmt_double(result.point_estimate) + ',' +
           fmt_double(result.confidence_halfwidth_95) + ',' +
           std::to_string(result.trials) + ',' + std::to_string(result.events) +
           ',' + (result.ci_valid ? "1" : "0");
}

// ---------------------------------------------------------------------------
// grid

int cmd_grid(const CommonOptions& options) {
    const json doc = load_config(options.config_path);
    const GridConfig config = parse_grid_config(doc, /*allow_direction=*/true);
    const ResourceGrid grid = build_grid(config);

    const fs::path out_dir(options.out_dir);
    fs::create_directories(out_dir);
    write_file(out_dir / "occupancy.csv", occupancy_csv(grid));
    write_file(out_dir / "occupancy.json", occupancy_json(grid).dump(2) + "\n");
    write_file(out_dir / "sparsity.csv", sparsity_csv(grid));
    write_manifest(out_dir, "grid", options.config_path, 0);

    std::cout << "wrote occupancy.csv, occupancy.json, sparsity.csv to "
              << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// threat

int cmd_threat(const CommonOptions& options) {
    const json doc = load_config(options.config_path);
    check_keys(doc, {"grid", "js_ch_overrides", "spoofing"}, "threat config");
    const GridConfig grid_config =
        parse_grid_config(doc.contains("grid") ? doc.at("grid") : json::object(),
                          /*allow_direction=*/false);

    int spoofed_pss = 3;
    int period_frames = 2;
    if (doc.contains("spoofing")) {
        const json& spoofing = doc.at("spoofing");
        check_keys(spoofing, {"n_fake_pss", "period_frames"}, "spoofing config");
        spoofed_pss = get_or(spoofing, "n_fake_pss", 3);
        period_frames = get_or(spoofing, "period_frames", 2);
    }

    auto profiles = default_attack_profiles(spoofed_pss, period_frames);
    if (doc.contains("js_ch_overrides")) {
        const json& overrides = doc.at("js_ch_overrides");
        if (!overrides.is_object()) {
            throw ConfigError("js_ch_overrides must map attack names to dB values");
        }
        for (const auto& item : overrides.items()) {
            bool found = false;
            for (auto& profile : profiles) {
                if (profile.name == item.key()) {
                    profile.js_ch_db = item.value().get<double>();
                    found = true;
                }
            }
            if (!found) {
                throw ConfigError("js_ch_overrides names unknown attack \"" +
                                  item.key() + "\"");
            }
        }
    }

    const auto entries = assess(grid_config, profiles);
    const auto points = ranking_scatter(entries);

    const fs::path out_dir(options.out_dir);
    fs::create_directories(out_dir);
    write_file(out_dir / "threat_table.csv", threat_table_csv(entries));
    write_file(out_dir / "attack_ranking.csv", ranking_csv(points));
    write_manifest(out_dir, "threat", options.config_path, 0);

    std::cout << "wrote threat_table.csv, attack_ranking.csv to "
              << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SweepBounds {
    double from_db;
    double to_db;
    double step_db;
};

SweepBounds parse_sweep(const json& obj, double from_def, double to_def,
                        double step_def) {
    SweepBounds bounds{get_or(obj, "js_from_db", from_def),
                       get_or(obj, "js_to_db", to_def),
                       get_or(obj, "js_step_db", step_def)};
    if (bounds.step_db <= 0.0 || bounds.to_db < bounds.from_db) {
        throw ConfigError("invalid J/S sweep bounds");
    }
    return bounds;
}

long checked_trials(long trials) {
    if (trials < 1) throw ConfigError("trials must be at least 1");
    return trials;
}

int cmd_simulate(const CommonOptions& options) {
    const json doc = load_config(options.config_path);
    check_keys(doc,
               {"seed", "ber_sweep", "bler_sweep", "pss_sweep", "dos_thresholds"},
               "simulate config");
    const std::uint64_t seed =
        options.seed_override ? std::uint64_t(*options.seed_override)
                              : get_or<std::uint64_t>(doc, "seed", 1);

    const fs::path out_dir(options.out_dir);
    fs::create_directories(out_dir);
    json results = {{"seed", seed}, {"tool_version", kVersion}, {"config", doc}};
    std::vector<std::string> written;

    if (doc.contains("ber_sweep")) {
        const json& section = doc.at("ber_sweep");
        check_keys(section, {"ebn0_db", "bits"}, "ber_sweep");
        const auto points = require<std::vector<double>>(section, "ebn0_db", "ber_sweep");
        const long bits =
            options.trials_override
                ? checked_trials(*options.trials_override)
                : checked_trials(get_or<long>(section, "bits", 1000000));

        std::string csv = "ebn0_db,ber,ci_halfwidth_95,trials,events,ci_valid\n";
        json records = json::array();
        for (std::size_t i = 0; i < points.size(); ++i) {
            const SimResult r =
                simulate_qpsk_ber(points[i], bits - (bits % 2), derive_seed(seed, i));
            csv += fmt_double(points[i]) + ',' + result_csv_row(r) + '\n';
            records.push_back(result_record(r));
            records.back()["ebn0_db"] = points[i];
        }
        write_file(out_dir / "ber_sweep.csv", csv);
        results["ber_sweep"] = records;
        written.push_back("ber_sweep.csv");
    }

    if (doc.contains("bler_sweep")) {
        const json& section = doc.at("bler_sweep");
        check_keys(section,
                   {"snr_db", "js_from_db", "js_to_db", "js_step_db", "trials",
                    "polar_n", "polar_k", "design_snr_db", "target", "duty_cycle"},
                   "bler_sweep");
        const SweepBounds bounds = parse_sweep(section, -10, 20, 1);
        LinkConfig link;
        link.snr_db = get_or(section, "snr_db", 10.0);
        link.code = PolarCodeSpec{get_or(section, "polar_n", 256),
                                  get_or(section, "polar_k", 85),
                                  get_or(section, "design_snr_db", 0.0)};
        link.trials = options.trials_override
                          ? checked_trials(*options.trials_override)
                          : checked_trials(get_or<long>(section, "trials", 1000));

        JammerSpec jammer;
        jammer.kind = JammerSpec::Kind::channel_selective;
        jammer.target =
            channel_kind_from_string(get_or<std::string>(section, "target", "PBCH"));
        jammer.duty_cycle = get_or(section, "duty_cycle", 1.0);

        std::string csv = "js_ch_db,bler,ci_halfwidth_95,trials,events,ci_valid\n";
        json records = json::array();
        std::size_t index = 0;
        for (double js = bounds.from_db; js <= bounds.to_db + 1e-9;
             js += bounds.step_db, ++index) {
            jammer.j_s_ch_db = js;
            LinkConfig point = link;
            point.seed = derive_seed(seed, index);
            const SimResult r = simulate_bler(point, jammer);
            csv += fmt_double(js) + ',' + result_csv_row(r) + '\n';
            records.push_back(result_record(r));
            records.back()["js_ch_db"] = js;
        }
        write_file(out_dir / "bler_sweep.csv", csv);
        results["bler_sweep"] = records;
        written.push_back("bler_sweep.csv");
    }

    if (doc.contains("pss_sweep")) {
        const json& section = doc.at("pss_sweep");
        check_keys(section,
                   {"snr_db", "js_from_db", "js_to_db", "js_step_db", "trials",
                    "window_len", "false_alarm_prob", "calibration_trials"},
                   "pss_sweep");
        const SweepBounds bounds = parse_sweep(section, -10, 30, 1);
        const long trials = options.trials_override
                                ? checked_trials(*options.trials_override)
                                : checked_trials(get_or<long>(section, "trials", 500));

        PssDetectionConfig config;
        config.snr_db = get_or(section, "snr_db", 10.0);
        config.window_len = get_or(section, "window_len", 512);
        config.false_alarm_prob = get_or(section, "false_alarm_prob", 0.01);
        config.calibration_trials = get_or(section, "calibration_trials", 2000);
        config.threshold = calibrate_pss_threshold(
            config.window_len, config.false_alarm_prob, config.calibration_trials,
            derive_seed(seed, 0x510CA1));

        std::string csv = "js_ch_db,pd,ci_halfwidth_95,trials,events,ci_valid\n";
        json records = json::array();
        double js50 = std::numeric_limits<double>::quiet_NaN();
        double prev_js = 0.0, prev_pd = -1.0;
        std::size_t index = 0;
        for (double js = bounds.from_db; js <= bounds.to_db + 1e-9;
             js += bounds.step_db, ++index) {
            const SimResult r =
                simulate_pss_detection(js, trials, derive_seed(seed, 1000 + index),
                                       config);
            csv += fmt_double(js) + ',' + result_csv_row(r) + '\n';
            records.push_back(result_record(r));
            records.back()["js_ch_db"] = js;
            if (std::isnan(js50) && prev_pd >= 0.5 && r.point_estimate < 0.5) {
                // Linear interpolation between the bracketing sweep points.
                js50 = prev_js + (prev_pd - 0.5) /
                                     (prev_pd - r.point_estimate) * (js - prev_js);
            }
            prev_js = js;
            prev_pd = r.point_estimate;
        }
        write_file(out_dir / "pss_detection_sweep.csv", csv);
        results["pss_sweep"] = {{"points", records},
                                {"detector_threshold", *config.threshold},
                                {"js50_db", std::isnan(js50) ? json() : json(js50)}};
        written.push_back("pss_detection_sweep.csv");
    }

    if (doc.contains("dos_thresholds")) {
        const json& section = doc.at("dos_thresholds");
        check_keys(section,
                   {"channels", "snr_db", "trials", "js_from_db", "js_to_db",
                    "js_step_db", "polar_n", "polar_k", "design_snr_db",
                    "window_len", "false_alarm_prob", "calibration_trials"},
                   "dos_thresholds");
        const auto channels =
            require<std::vector<std::string>>(section, "channels", "dos_thresholds");
        const SweepBounds bounds = parse_sweep(section, -10, 30, 1);

        LinkConfig link;
        link.snr_db = get_or(section, "snr_db", 10.0);
        link.code = PolarCodeSpec{get_or(section, "polar_n", 256),
                                  get_or(section, "polar_k", 85),
                                  get_or(section, "design_snr_db", 0.0)};
        link.trials = options.trials_override
                          ? checked_trials(*options.trials_override)
                          : checked_trials(get_or<long>(section, "trials", 400));
        link.seed = seed;

        PssDetectionConfig pss_config;
        pss_config.window_len = get_or(section, "window_len", 512);
        pss_config.false_alarm_prob = get_or(section, "false_alarm_prob", 0.01);
        pss_config.calibration_trials = get_or(section, "calibration_trials", 2000);
        pss_config.snr_db = link.snr_db;

        std::string csv = "channel,dos_threshold_js_ch_db\n";
        json records = json::object();
        for (const std::string& name : channels) {
            const ChannelKind kind = channel_kind_from_string(name);
            try {
                const double threshold = dos_threshold(
                    kind, link, JsSweep{bounds.from_db, bounds.to_db, bounds.step_db},
                    pss_config);
                csv += name + ',' + fmt_double(threshold) + '\n';
                records[name] = threshold;
            } catch (const NoThresholdInRange&) {
                csv += name + ",NA\n";
                records[name] = nullptr;
            }
        }
        write_file(out_dir / "dos_thresholds.csv", csv);
        results["dos_thresholds"] = records;
        written.push_back("dos_thresholds.csv");
    }

    if (written.empty()) {
        throw ConfigError("simulate config requests no sweeps");
    }
    write_file(out_dir / "simulate_results.json", results.dump(2) + "\n");
    write_manifest(out_dir, "simulate", options.config_path, seed);

    std::cout << "wrote";
    for (const auto& name : written) std::cout << ' ' << name;
    std::cout << " and simulate_results.json to " << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// defend

CellBeacon parse_beacon(const json& obj) {
    check_keys(obj,
               {"n_id_2", "n_id_1", "rx_power_db", "timing_offset_ms",
                "has_valid_sss", "mib_decodable", "legitimate"},
               "beacon");
    CellBeacon beacon;
    beacon.n_id_2 = require<int>(obj, "n_id_2", "beacon");
    if (obj.contains("n_id_1")) beacon.n_id_1 = obj.at("n_id_1").get<int>();
    beacon.rx_power_db = get_or(obj, "rx_power_db", 0.0);
    beacon.timing_offset_ms = get_or(obj, "timing_offset_ms", 0.0);
    beacon.has_valid_sss = get_or(obj, "has_valid_sss", true);
    beacon.mib_decodable = get_or(obj, "mib_decodable", true);
    beacon.legitimate = get_or(obj, "legitimate", true);
    return beacon;
}

// Monte Carlo over a fixed, explicitly listed environment.
SimResult fixed_env_dos(const std::vector<CellBeacon>& environment,
                        const AttackerModel& attacker, const SearchConfig& config,
                        long trials, std::uint64_t seed) {
    long dos_count = 0;
    for (long trial = 0; trial < trials; ++trial) {
        const SearchOutcome outcome = cell_search(
            environment, attacker, config, derive_seed(seed, std::uint64_t(trial)));
        if (!outcome.success()) ++dos_count;
    }
    return make_rate_result(dos_count, trials, seed,
                            double(dos_count) / double(trials));
}

int cmd_defend(const CommonOptions& options) {
    const json doc = load_config(options.config_path);
    check_keys(doc,
               {"seed", "trials", "beacons", "environment", "attacker", "search",
                "blacklist", "power_offset_sweep_db"},
               "defend scenario");
    const std::uint64_t seed =
        options.seed_override ? std::uint64_t(*options.seed_override)
                              : get_or<std::uint64_t>(doc, "seed", 1);
    const long trials = options.trials_override
                            ? checked_trials(*options.trials_override)
                            : checked_trials(get_or<long>(doc, "trials", 1000));

    AttackerModel attacker;
    if (doc.contains("attacker")) {
        const json& section = doc.at("attacker");
        check_keys(section,
                   {"n_fake_pss", "power_offset_db", "rotate_each_frame",
                    "period_ms", "spoofs_sss"},
                   "attacker");
        attacker.n_fake_pss = get_or(section, "n_fake_pss", 0);
        attacker.power_offset_db = get_or(section, "power_offset_db", 6.0);
        attacker.rotate_each_frame = get_or(section, "rotate_each_frame", false);
        attacker.period_ms = get_or(section, "period_ms", 20.0);
        attacker.spoofs_sss = get_or(section, "spoofs_sss", false);
    }

    SearchConfig search;
    if (doc.contains("search")) {
        const json& section = doc.at("search");
        check_keys(section, {"sss_timer_ms", "mib_timer_ms", "max_iterations"},
                   "search");
        search.sss_timer_ms = get_or(section, "sss_timer_ms", 20.0);
        search.mib_timer_ms = get_or(section, "mib_timer_ms", 80.0);
        search.max_iterations = get_or(section, "max_iterations", 50);
    }
    if (doc.contains("blacklist")) {
        const json& section = doc.at("blacklist");
        check_keys(section, {"decay_ms", "bucket_ms"}, "blacklist");
        search.blacklist_decay_ms = get_or(section, "decay_ms", 1000.0);
        search.blacklist_bucket_ms = get_or(section, "bucket_ms", 0.5);
    }

    std::vector<CellBeacon> fixed_beacons;
    ScenarioRandomization randomization;
    const bool explicit_env = doc.contains("beacons");
    if (explicit_env) {
        for (const json& item : doc.at("beacons")) {
            fixed_beacons.push_back(parse_beacon(item));
        }
    } else if (doc.contains("environment")) {
        const json& section = doc.at("environment");
        check_keys(section, {"legit_cells", "power_window_db"}, "environment");
        randomization.legit_cells = get_or(section, "legit_cells", 1);
        if (section.contains("power_window_db")) {
            const auto window = section.at("power_window_db").get<std::vector<double>>();
            if (window.size() != 2) {
                throw ConfigError("power_window_db must be [low, high]");
            }
            randomization.power_window_low_db = window[0];
            randomization.power_window_high_db = window[1];
        }
    }

    std::vector<double> offsets;
    if (doc.contains("power_offset_sweep_db")) {
        offsets = doc.at("power_offset_sweep_db").get<std::vector<double>>();
        if (offsets.empty()) throw ConfigError("power_offset_sweep_db is empty");
    } else {
        offsets.push_back(attacker.power_offset_db);
    }

    std::string csv =
        "power_offset_db,mitigation,p_dos,ci_halfwidth_95,trials,events,ci_valid\n";
    json records = json::array();
    for (double offset : offsets) {
        AttackerModel arm_attacker = attacker;
        arm_attacker.power_offset_db = offset;
        for (bool mitigation : {false, true}) {
            SearchConfig arm_config = search;
            arm_config.mitigation_enabled = mitigation;
            const SimResult result =
                explicit_env
                    ? fixed_env_dos(fixed_beacons, arm_attacker, arm_config, trials,
                                    seed)
                    : simulate_dos_probability(arm_attacker, arm_config,
                                               randomization, trials, seed);
            csv += fmt_double(offset) + ',' + (mitigation ? "on" : "off") + ',' +
                   result_csv_row(result) + '\n';
            json record = result_record(result);
            record["power_offset_db"] = offset;
            record["mitigation"] = mitigation;
            records.push_back(record);
        }
    }

    const fs::path out_dir(options.out_dir);
    fs::create_directories(out_dir);
    write_file(out_dir / "defense_results.csv", csv);
    const json results = {{"seed", seed},
                          {"trials", trials},
                          {"tool_version", kVersion},
                          {"config", doc},
                          {"results", records}};
    write_file(out_dir / "defense_results.json", results.dump(2) + "\n");
    write_manifest(out_dir, "defend", options.config_path, seed);

    std::cout << "wrote defense_results.csv, defense_results.json to "
              << out_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"5G NR physical-layer jamming threat assessment toolkit"};
    app.require_subcommand(1);

    CommonOptions options;
    int (*handler)(const CommonOptions&) = nullptr;

    for (const auto& [name, description, fn] :
         {std::tuple{"grid", "build a frame occupancy map and sparsity table",
                     &cmd_grid},
          std::tuple{"threat", "compute the threat table and attack ranking",
                     &cmd_threat},
          std::tuple{"simulate", "run Monte-Carlo link-level sweeps",
                     &cmd_simulate},
          std::tuple{"defend", "evaluate PSS-spoofing mitigation", &cmd_defend}}) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", options.config_path, "JSON config path")
            ->required();
        sub->add_option("--out", options.out_dir, "output directory");
        sub->add_option("--seed", options.seed_override, "override config seed");
        sub->add_option("--trials", options.trials_override,
                        "override per-point trial count");
        sub->callback([&handler, fn = fn]() { handler = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        return handler(options);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigConflict& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownSpacing& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedCombination& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
