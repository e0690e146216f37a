// ncsat - link-level simulator for non-coherent massive MIMO satellite links
// Copyright (C) 2026 the ncsat authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ncsat/config.hpp"
#include "ncsat/engine.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

void print_record(const ncsat::BerRecord& record)
{
    std::printf("n_ele=%-4d R=%-6d snr=%8.2f dB  aggregate_ber=%.6g", record.n_ele, record.num_rx,
                record.snr_db, record.aggregate_ber);
    for (std::size_t j = 0; j < record.per_user_ber.size(); ++j)
        std::printf("  u%zu=%.6g", j, record.per_user_ber[j]);
    std::printf("\n");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ncsat - link-level simulator for non-coherent massive MIMO satellite links"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    int workers = 1;
    double min_snr_db = 0.0;
    double target_ber = 1e-2;
    std::string preset_name;

    auto* run = app.add_subcommand("run", "Run the full BER sweep of a config");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--seed", seed_override, "Override the config's master seed");
    run->add_option("--out", out_dir, "Output directory for results.csv and manifest.json");
    run->add_option("--workers", workers, "Worker threads (does not change results)")
        ->check(CLI::PositiveNumber);

    auto* validate_cmd = app.add_subcommand("validate", "Parse a config and check its joint constellation");
    validate_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();

    auto* min_antennas = app.add_subcommand("min-antennas",
                                            "Smallest n_ele in the config's list meeting a target BER");
    min_antennas->add_option("config", config_path, "Experiment config (JSON)")->required();
    min_antennas->add_option("--snr", min_snr_db, "Per-user SNR in dB")->required();
    min_antennas->add_option("--target", target_ber, "Target aggregate BER")->required();
    min_antennas->add_option("--seed", seed_override, "Override the config's master seed");
    min_antennas->add_option("--workers", workers, "Worker threads (does not change results)")
        ->check(CLI::PositiveNumber);

    auto* preset = app.add_subcommand("preset", "Print a built-in scenario config document");
    preset->add_option("name", preset_name, "Preset name (vsat_geo, mega_leo)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (preset->parsed()) {
            std::cout << ncsat::config_to_json(ncsat::preset_by_name(preset_name));
            return kExitOk;
        }

        ncsat::ScenarioConfig config = ncsat::parse_config_file(config_path);
        if (seed_override)
            config.master_seed = *seed_override;

        if (validate_cmd->parsed()) {
            const auto joint = ncsat::build_joint(ncsat::user_set_for(config));
            if (!joint.valid()) {
                std::cerr << "invalid: joint constellation is degenerate (min distance "
                          << joint.min_distance << ")\n";
                return kExitConfigError;
            }
            std::printf("ok: %s  users=%d  joint_points=%zu  min_distance=%.6g\n",
                        config.name.c_str(), config.num_users, joint.size(), joint.min_distance);
            return kExitOk;
        }

        if (min_antennas->parsed()) {
            const auto found =
                ncsat::find_min_antennas(config, min_snr_db, target_ber, workers);
            if (found)
                std::printf("min n_ele: %d (R=%d) for aggregate BER <= %g at %g dB\n", *found,
                            *found * *found, target_ber, min_snr_db);
            else
                std::printf("not-found: no n_ele in the list meets BER <= %g at %g dB\n",
                            target_ber, min_snr_db);
            return kExitOk;
        }

        // run
        const auto records = ncsat::sweep(config, workers);
        for (const auto& record : records)
            print_record(record);
        const auto manifest = ncsat::make_manifest(config_path, config, out_dir);
        ncsat::emit_results(records, manifest);
        std::printf("wrote %s/results.csv and %s/manifest.json (seed %llu)\n", out_dir.c_str(),
                    out_dir.c_str(), static_cast<unsigned long long>(config.master_seed));
        return kExitOk;
    } catch (const ncsat::config_error& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return kExitConfigError;
    } catch (const ncsat::invalid_constellation& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitRuntimeError;
    }
}
