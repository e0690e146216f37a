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

#include "ncsat/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace ncsat {

namespace {

void require(bool condition, const std::string& message)
{
    if (!condition)
        throw config_error(message);
}

bool is_power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

std::vector<LinkGeometry> links_for(const ScenarioConfig& config)
{
    std::vector<LinkGeometry> links;
    links.reserve(config.users.size());
    for (const UserPosition& user : config.users)
        links.push_back(
            make_link(config.sat_altitude_m, user.lat_rad, user.lon_rad, config.wavelength_m));
    return links;
}

ChannelParams channel_params_for(const ScenarioConfig& config)
{
    ChannelParams params;
    params.tx_gain = config.tx_gain;
    params.rician_factor = config.rician_factor;
    params.phase_noise_bound = config.phase_noise_bound;
    params.normalize = config.channel_mode == ChannelMode::normalized;
    return params;
}

// Applies the per-user power weights at the transmit side: amplitude
// sqrt(w_j) on column j, so the conjugate-product statistic carries weight
// w_j per user, matching the joint constellation's weighting.
void apply_power_weights(ChannelMatrix& matrix, const std::vector<double>& weights)
{
    for (std::size_t j = 0; j < matrix.cols; ++j) {
        const double w = weights[j];
        if (w == 1.0)
            continue;
        const double amp = std::sqrt(w);
        for (cplx& coeff : matrix.column(j))
            coeff *= amp;
        matrix.per_user_power[j] *= w;
    }
}

std::uint64_t count_bit_errors(const std::vector<std::uint8_t>& sent,
                               const std::vector<std::uint8_t>& decoded)
{
    std::uint64_t errors = 0;
    for (std::size_t b = 0; b < sent.size(); ++b)
        errors += sent[b] != decoded[b];
    return errors;
}

struct FrameResult {
    std::vector<std::uint64_t> per_user_errors;
};

// Runs frame `frame_index` of one point end to end. All randomness comes
// from the frame's own seeded stream, consumed in a fixed order: channel,
// then payload bits per user, then noise.
FrameResult run_frame(const ScenarioConfig& config, const UserConstellationSet& set,
                      const JointConstellation& joint, const ArrayGeometry& array,
                      const std::vector<LinkGeometry>& links, const ChannelParams& params,
                      double noise_variance, int n_ele, double snr_db, int frame_index)
{
    Rng rng(frame_seed(config.master_seed, n_ele, snr_db, frame_index));

    ChannelMatrix channel = draw_channel(array, links, params, rng);
    apply_power_weights(channel, config.powers);

    std::vector<Frame> frames;
    frames.reserve(set.users.size());
    for (const UserConstellation& user : set.users)
        frames.push_back(random_frame(user.user_id, user.psk, config.frame_length, rng));

    const ReceivedBlock block =
        transmit_through(frames, channel, noise_variance, config.doppler_drift, rng);
    const DecisionSequence decisions = detect_frame(block, joint, set);

    FrameResult result;
    result.per_user_errors.resize(set.users.size());
    for (std::size_t j = 0; j < set.users.size(); ++j)
        result.per_user_errors[j] = count_bit_errors(frames[j].info_bits, decisions.per_user_bits[j]);
    return result;
}

} // namespace

void validate(const ScenarioConfig& config)
{
    require(config.num_users >= 1, "num_users: must be >= 1");
    require(config.psk_order >= 2, "psk_order: must be >= 2");
    require(is_power_of_two(config.psk_order),
            "psk_order: must be a power of two (Gray-coded bit mapping)");
    // Joint constellation size M^J bounds the per-symbol detection cost.
    double joint_points = 1.0;
    for (int j = 0; j < config.num_users; ++j)
        joint_points *= static_cast<double>(config.psk_order);
    require(joint_points <= 1048576.0,
            "num_users/psk_order: joint constellation would exceed 2^20 points");
    require(config.rotations.size() == static_cast<std::size_t>(config.num_users),
            "rotations: need one rotation per user");
    require(config.powers.size() == static_cast<std::size_t>(config.num_users),
            "powers: need one power weight per user");
    for (double p : config.powers)
        require(p >= 0.0, "powers: weights must be >= 0");
    require(!config.n_ele_list.empty(), "n_ele: sweep list must be non-empty");
    for (int n : config.n_ele_list)
        require(n >= 1, "n_ele: entries must be >= 1");
    require(!config.snr_db_list.empty(), "snr_db: sweep list must be non-empty");
    for (double snr : config.snr_db_list)
        require(std::isfinite(snr) || snr > 0.0, "snr_db: entries must be finite or +inf");
    require(config.rician_factor >= 0.0, "rician_factor: must be >= 0");
    require(config.phase_noise_bound >= 0.0, "phase_noise_bound: must be >= 0");
    require(config.sat_altitude_m > 0.0, "sat_altitude_m: must be > 0");
    require(config.users.size() == static_cast<std::size_t>(config.num_users),
            "users: position count (" + std::to_string(config.users.size()) +
                ") does not match num_users (" + std::to_string(config.num_users) + ")");
    for (const UserPosition& user : config.users)
        require(std::abs(user.lat_rad) <= kPi / 2.0, "users: |lat_rad| must be <= pi/2");
    require(config.frame_length >= 1, "frame_length: must be >= 1");
    require(config.frames_per_point >= 1, "frames_per_point: must be >= 1");
    require(config.wavelength_m > 0.0, "wavelength_m: must be > 0");
    require(config.spacing_wavelengths > 0.0, "spacing_wavelengths: must be > 0");
    require(config.tx_gain.size() == static_cast<std::size_t>(config.num_users),
            "tx_gain: need one gain per user");
    for (double g : config.tx_gain)
        require(g > 0.0, "tx_gain: gains must be > 0");
}

UserConstellationSet user_set_for(const ScenarioConfig& config)
{
    return make_user_set(config.num_users, config.psk_order, config.rotations, config.powers);
}

double noise_variance_for(const ScenarioConfig& config, double snr_db)
{
    if (std::isinf(snr_db) && snr_db > 0.0)
        return 0.0; // noiseless sentinel
    require(std::isfinite(snr_db), "snr_db: must be finite or +inf (noiseless)");

    // Reference signal power: mean over users of the expected per-antenna
    // receive power (weight w_j in normalized mode, w_j * G_j * P_loss in
    // link-budget mode). With equal weights every user's SNR equals the
    // configured value.
    double mean_power = 0.0;
    for (int j = 0; j < config.num_users; ++j) {
        double p = config.powers[static_cast<std::size_t>(j)];
        if (config.channel_mode == ChannelMode::link_budget) {
            const double d = slant_range(config.sat_altitude_m,
                                         config.users[static_cast<std::size_t>(j)].lat_rad,
                                         config.users[static_cast<std::size_t>(j)].lon_rad);
            p *= config.tx_gain[static_cast<std::size_t>(j)] * path_loss(config.wavelength_m, d);
        }
        mean_power += p;
    }
    mean_power /= static_cast<double>(config.num_users);

    return mean_power / std::pow(10.0, snr_db / 10.0);
}

std::uint64_t frame_seed(std::uint64_t master_seed, int n_ele, double snr_db, int frame_index)
{
    return mix_seed(master_seed, static_cast<std::uint64_t>(n_ele),
                    std::bit_cast<std::uint64_t>(snr_db), static_cast<std::uint64_t>(frame_index));
}

BerRecord run_point(const ScenarioConfig& config, int n_ele, double snr_db, int workers)
{
    validate(config);
    require(n_ele >= 1, "n_ele: must be >= 1");

    const UserConstellationSet set = user_set_for(config);
    const JointConstellation joint = build_joint(set);
    if (!joint.valid())
        throw invalid_constellation(
            "run_point: joint constellation is degenerate (min distance " +
            std::to_string(joint.min_distance) + "); adjust rotations or powers");

    const ArrayGeometry array =
        ura_positions(n_ele, config.spacing_wavelengths, config.wavelength_m);
    const std::vector<LinkGeometry> links = links_for(config);
    const ChannelParams params = channel_params_for(config);
    const double noise_variance = noise_variance_for(config, snr_db);

    const int n_frames = config.frames_per_point;
    std::vector<FrameResult> results(static_cast<std::size_t>(n_frames));

    const int n_workers = std::max(1, std::min(workers, n_frames));
    if (n_workers == 1) {
        for (int f = 0; f < n_frames; ++f)
            results[static_cast<std::size_t>(f)] = run_frame(config, set, joint, array, links, params,
                                                             noise_variance, n_ele, snr_db, f);
    } else {
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            try {
                for (int f = next.fetch_add(1); f < n_frames; f = next.fetch_add(1))
                    results[static_cast<std::size_t>(f)] = run_frame(
                        config, set, joint, array, links, params, noise_variance, n_ele, snr_db, f);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    // Deterministic reduction over frame indices.
    BerRecord record;
    record.n_ele = n_ele;
    record.num_rx = n_ele * n_ele;
    record.snr_db = snr_db;
    record.frames_run = n_frames;
    record.master_seed = config.master_seed;
    record.per_user_bit_errors.assign(set.users.size(), 0);
    record.per_user_bits.assign(set.users.size(), 0);
    record.per_user_ber.assign(set.users.size(), 0.0);

    for (const FrameResult& result : results)
        for (std::size_t j = 0; j < set.users.size(); ++j)
            record.per_user_bit_errors[j] += result.per_user_errors[j];

    std::uint64_t total_errors = 0;
    std::uint64_t total_bits = 0;
    for (std::size_t j = 0; j < set.users.size(); ++j) {
        const std::uint64_t bits_per_frame =
            static_cast<std::uint64_t>(config.frame_length) *
            static_cast<std::uint64_t>(set.users[j].psk.bits_per_symbol());
        record.per_user_bits[j] = bits_per_frame * static_cast<std::uint64_t>(n_frames);
        record.per_user_ber[j] = static_cast<double>(record.per_user_bit_errors[j]) /
                                 static_cast<double>(record.per_user_bits[j]);
        total_errors += record.per_user_bit_errors[j];
        total_bits += record.per_user_bits[j];
    }
    record.aggregate_ber = static_cast<double>(total_errors) / static_cast<double>(total_bits);
    return record;
}

std::vector<BerRecord> sweep(const ScenarioConfig& config, int workers)
{
    validate(config);

    std::vector<BerRecord> records;
    records.reserve(config.n_ele_list.size() * config.snr_db_list.size());
    for (int n_ele : config.n_ele_list)
        for (double snr_db : config.snr_db_list)
            records.push_back(run_point(config, n_ele, snr_db, workers));
    return records;
}

std::optional<int> find_min_antennas(const ScenarioConfig& config, double snr_db, double target_ber,
                                     int workers)
{
    validate(config);
    require(target_ber > 0.0 && target_ber < 0.5, "target_ber: must be in (0, 0.5)");
    require(std::is_sorted(config.n_ele_list.begin(), config.n_ele_list.end()),
            "n_ele: list must be ascending for a minimum-antenna search");

    for (int n_ele : config.n_ele_list) {
        const BerRecord record = run_point(config, n_ele, snr_db, workers);
        if (record.aggregate_ber <= target_ber)
            return n_ele;
    }
    return std::nullopt;
}

ScenarioConfig preset_vsat_geo()
{
    ScenarioConfig config;
    config.name = "vsat_geo";
    config.num_users = 2;
    config.psk_order = 2;
    config.rotations = assign_rotations(2, 2); // {0, pi/2}
    config.powers = {1.0, 1.0};
    config.n_ele_list = {8, 16, 32};
    config.snr_db_list = {-5.0, 0.0, 5.0};
    config.rician_factor = 10.0;
    // Uncalibrated array: static per-antenna phases anywhere on the circle.
    // The differential detector cancels them per user; across users they
    // decorrelate the LoS array responses, which separability needs when
    // terminals share a beam.
    config.phase_noise_bound = kPi;
    config.doppler_drift = 0.0;
    config.sat_altitude_m = 35786000.0;
    config.users = {{0.0, 0.0}, {0.02, -0.015}};
    config.frame_length = 100;
    config.frames_per_point = 200;
    config.channel_mode = ChannelMode::normalized;
    config.wavelength_m = 0.15;
    config.spacing_wavelengths = 0.5;
    config.tx_gain = {1.0, 1.0};
    config.master_seed = 1;
    return config;
}

ScenarioConfig preset_mega_leo()
{
    ScenarioConfig config;
    config.name = "mega_leo";
    config.num_users = 4;
    config.psk_order = 2;
    config.rotations = assign_rotations(4, 2); // {0, pi/4, pi/2, 3pi/4}
    config.powers = {1.0, 1.0, 1.0, 1.0};
    config.n_ele_list = {16, 32, 64};
    config.snr_db_list = {0.0, 5.0};
    config.rician_factor = 0.0; // pure multipath
    config.phase_noise_bound = kPi;
    config.doppler_drift = 0.01; // residual Doppler, radians/symbol
    config.sat_altitude_m = 600000.0;
    config.users = {{0.0, 0.0}, {0.01, 0.01}, {-0.01, 0.015}, {0.02, -0.01}};
    config.frame_length = 100;
    config.frames_per_point = 200;
    config.channel_mode = ChannelMode::normalized;
    config.wavelength_m = 0.15;
    config.spacing_wavelengths = 0.5;
    config.tx_gain = {1.0, 1.0, 1.0, 1.0};
    config.master_seed = 1;
    return config;
}

} // namespace ncsat
