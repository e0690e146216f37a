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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ncsat/engine.hpp"

namespace ncsat {

inline constexpr const char* kToolVersion = "0.1.0";

// Parses a JSON experiment document into a validated ScenarioConfig.
// A "preset" key selects a built-in scenario whose fields any other key
// overrides. Unknown keys are errors, not warnings. Throws config_error
// with line/column info for malformed documents and the offending field
// name for invalid values.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::filesystem::path& path);

// Canonical JSON document for a resolved config (the `preset` CLI verb and
// the manifest both use it). Round trips through parse_config unchanged.
std::string config_to_json(const ScenarioConfig& config);

ScenarioConfig preset_by_name(const std::string& name);

// Provenance record tying emitted result files to the exact resolved
// configuration and seed that produced them.
struct RunManifest {
    std::string config_path;
    ScenarioConfig config;
    std::string output_dir;
    std::string tool_version = kToolVersion;
    std::string timestamp; // ISO 8601 UTC
    std::uint64_t master_seed = 0;
};

RunManifest make_manifest(const std::string& config_path, const ScenarioConfig& config,
                          const std::string& output_dir);

std::string manifest_to_json(const RunManifest& manifest);
RunManifest parse_manifest(const std::string& text);

// CSV with header n_ele,R,snr_db,user_id,bit_errors,bits,ber,aggregate_ber,
// frames,seed: one row per (point, user) plus an aggregate row with
// user_id = -1. Numeric formatting is shortest-round-trip, so equal records
// always produce byte-identical text.
std::string format_results_csv(const std::vector<BerRecord>& records);
std::vector<BerRecord> parse_results_csv(const std::string& text);

// Writes results.csv and manifest.json into the manifest's output
// directory. Records must be non-empty and in the config's sweep order
// (n_ele outer, snr inner).
void emit_results(const std::vector<BerRecord>& records, const RunManifest& manifest);

std::vector<BerRecord> read_results_csv(const std::filesystem::path& path);

} // namespace ncsat
