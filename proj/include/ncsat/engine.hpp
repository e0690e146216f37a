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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsat/channel.hpp"
#include "ncsat/constellation.hpp"
#include "ncsat/phy.hpp"

namespace ncsat {

class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ChannelMode { normalized, link_budget };

struct UserPosition {
    double lat_rad = 0.0;
    double lon_rad = 0.0;

    bool operator==(const UserPosition&) const = default;
};

// Complete description of one experiment: constellation assignment, array
// and link geometry, channel knobs, sweep axes and seeding.
struct ScenarioConfig {
    std::string name = "custom";
    int num_users = 0;
    int psk_order = 0;
    std::vector<double> rotations; // resolved per-user rotation offsets
    std::vector<double> powers;    // per-user power weights
    std::vector<int> n_ele_list;   // sweep axis, R = n_ele^2
    std::vector<double> snr_db_list; // sweep axis; +inf = noiseless
    double rician_factor = 0.0;
    double phase_noise_bound = 0.0;
    double doppler_drift = 0.0; // common phase increment, radians/symbol
    double sat_altitude_m = 0.0;
    std::vector<UserPosition> users;
    int frame_length = 100;
    int frames_per_point = 200;
    ChannelMode channel_mode = ChannelMode::normalized;
    double wavelength_m = 0.15;
    double spacing_wavelengths = 0.5;
    std::vector<double> tx_gain;
    std::uint64_t master_seed = 1;

    bool operator==(const ScenarioConfig&) const = default;
};

// Throws config_error naming the offending field.
void validate(const ScenarioConfig& config);

// One Monte Carlo measurement point.
struct BerRecord {
    int n_ele = 0;
    int num_rx = 0; // R = n_ele^2
    double snr_db = 0.0;
    std::vector<std::uint64_t> per_user_bit_errors;
    std::vector<std::uint64_t> per_user_bits;
    std::vector<double> per_user_ber;
    double aggregate_ber = 0.0;
    int frames_run = 0;
    std::uint64_t master_seed = 0;

    bool operator==(const BerRecord&) const = default;
};

// Seed of one frame's random stream. Derived from the point's identifying
// values (not sweep indices), so a point's result is a function of
// (master_seed, n_ele, snr_db) alone, independent of sweep shape, execution
// order and worker count.
std::uint64_t frame_seed(std::uint64_t master_seed, int n_ele, double snr_db, int frame_index);

// Runs frames_per_point independent frames at one (n_ele, snr) point:
// draw channel -> encode J frames -> superpose + noise -> detect -> count
// bit errors. Frames are distributed over `workers` threads; results are
// identical for any worker count.
BerRecord run_point(const ScenarioConfig& config, int n_ele, double snr_db, int workers = 1);

// Cartesian product of the config's n_ele and SNR lists, in that order.
std::vector<BerRecord> sweep(const ScenarioConfig& config, int workers = 1);

// Smallest n_ele in the config's (ascending) list whose aggregate BER at
// snr_db does not exceed target_ber; nullopt when none qualifies.
std::optional<int> find_min_antennas(const ScenarioConfig& config, double snr_db, double target_ber,
                                     int workers = 1);

// GEO uplink: two VSAT terminals under one beam, LoS-dominant Rician
// channel, uncalibrated-array static phases.
ScenarioConfig preset_vsat_geo();

// LEO mega-constellation uplink: four users under one beam, pure multipath
// fading, residual Doppler drift.
ScenarioConfig preset_mega_leo();

// Resolved per-user alphabets of a config (order, rotations, power weights).
UserConstellationSet user_set_for(const ScenarioConfig& config);

// Per-antenna complex noise power that realizes the requested per-user SNR;
// 0 for the noiseless (+inf dB) sentinel.
double noise_variance_for(const ScenarioConfig& config, double snr_db);

} // namespace ncsat
