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

#include "ncsat/phy.hpp"

#include <cmath>
#include <string>

namespace ncsat {

namespace {

constexpr double kUnitMagnitudeTol = 1e-9;

void require_unit(cplx value, const char* what)
{
    if (std::abs(std::abs(value) - 1.0) > kUnitMagnitudeTol)
        throw std::invalid_argument(std::string(what) + ": symbol magnitude is not 1");
}

} // namespace

std::vector<cplx> diff_encode(std::span<const cplx> info_symbols, cplx reference)
{
    require_unit(reference, "diff_encode");
    for (const cplx& s : info_symbols)
        require_unit(s, "diff_encode");

    std::vector<cplx> tx;
    tx.reserve(info_symbols.size() + 1);
    tx.push_back(reference);
    for (const cplx& s : info_symbols)
        tx.push_back(tx.back() * s);
    return tx;
}

Frame make_frame(int user_id, const PskConstellation& psk, std::vector<std::uint8_t> bits)
{
    const int bits_per_symbol = psk.bits_per_symbol();
    if (bits.size() % static_cast<std::size_t>(bits_per_symbol) != 0)
        throw std::invalid_argument("make_frame: bit count is not a multiple of bits per symbol");

    Frame frame;
    frame.user_id = user_id;
    frame.info_bits = std::move(bits);

    const std::size_t n_symbols = frame.info_bits.size() / static_cast<std::size_t>(bits_per_symbol);
    frame.info_symbols.reserve(n_symbols);
    for (std::size_t n = 0; n < n_symbols; ++n) {
        const std::uint32_t label =
            bits_to_label(frame.info_bits.data() + n * static_cast<std::size_t>(bits_per_symbol),
                          bits_per_symbol);
        frame.info_symbols.push_back(psk.point(static_cast<int>(gray_decode(label))));
    }

    // Reference symbol: constellation-independent anchor at 1+0i.
    frame.tx_symbols = diff_encode(frame.info_symbols, cplx{1.0, 0.0});
    return frame;
}

Frame random_frame(int user_id, const PskConstellation& psk, int n_symbols, Rng& rng)
{
    if (n_symbols < 1)
        throw std::invalid_argument("random_frame: n_symbols must be >= 1");

    const int bits_per_symbol = psk.bits_per_symbol();
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n_symbols) * bits_per_symbol);
    for (auto& bit : bits)
        bit = static_cast<std::uint8_t>(rng.next_u64() >> 63);
    return make_frame(user_id, psk, std::move(bits));
}

ReceivedBlock transmit_through(const std::vector<Frame>& frames, const ChannelMatrix& channel,
                               double noise_variance, double doppler_drift, Rng& rng)
{
    if (frames.empty())
        throw std::invalid_argument("transmit_through: no frames");
    if (frames.size() != channel.cols)
        throw std::invalid_argument("transmit_through: frame count does not match channel columns");
    if (noise_variance < 0.0)
        throw std::invalid_argument("transmit_through: noise variance must be >= 0");

    const std::size_t n_slots = frames.front().tx_symbols.size();
    for (const Frame& frame : frames)
        if (frame.tx_symbols.size() != n_slots)
            throw std::invalid_argument("transmit_through: frames differ in length");

    ReceivedBlock block;
    block.rows = channel.rows;
    block.cols = n_slots;
    block.y.assign(channel.rows * n_slots, cplx{0.0, 0.0});
    block.noise_variance = noise_variance;

    const double noise_scale = noise_variance > 0.0 ? std::sqrt(noise_variance) : 0.0;
    for (std::size_t n = 0; n < n_slots; ++n) {
        auto out = block.column(n);
        for (std::size_t j = 0; j < channel.cols; ++j) {
            const cplx x = frames[j].tx_symbols[n];
            const auto col = channel.column(j);
            for (std::size_t i = 0; i < channel.rows; ++i)
                out[i] += col[i] * x;
        }
        if (doppler_drift != 0.0) {
            const double angle = doppler_drift * static_cast<double>(n);
            const cplx rot{std::cos(angle), std::sin(angle)};
            for (auto& v : out)
                v *= rot;
        }
        if (noise_scale > 0.0)
            for (auto& v : out)
                v += noise_scale * rng.complex_gaussian();
    }
    return block;
}

cplx rx_statistic(std::span<const cplx> y_prev, std::span<const cplx> y_curr)
{
    if (y_prev.size() != y_curr.size() || y_prev.empty())
        throw std::invalid_argument("rx_statistic: vectors must be non-empty and equal length");

    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < y_prev.size(); ++i)
        acc += std::conj(y_prev[i]) * y_curr[i];
    return acc / static_cast<double>(y_prev.size());
}

DecisionSequence detect_frame(const ReceivedBlock& block, const JointConstellation& joint,
                              const UserConstellationSet& set)
{
    if (!joint.valid())
        throw invalid_constellation("detect_frame: joint constellation is degenerate");
    if (block.cols < 2)
        throw std::invalid_argument("detect_frame: block needs at least two slots");

    const std::size_t n_symbols = block.cols - 1;
    const std::size_t num_users = static_cast<std::size_t>(set.size());

    DecisionSequence decisions;
    decisions.z.reserve(n_symbols);
    decisions.combos.reserve(n_symbols);
    decisions.per_user_bits.resize(num_users);
    for (std::size_t j = 0; j < num_users; ++j)
        decisions.per_user_bits[j].reserve(n_symbols *
                                           static_cast<std::size_t>(set.users[j].psk.bits_per_symbol()));

    for (std::size_t n = 1; n < block.cols; ++n) {
        const cplx z = rx_statistic(block.column(n - 1), block.column(n));
        const std::size_t entry = demap_joint_index(z, joint);
        const SymbolIndexCombo& combo = joint.entries[entry].combo;

        decisions.z.push_back(z);
        decisions.combos.push_back(combo);
        for (std::size_t j = 0; j < num_users; ++j) {
            const int bits_per_symbol = set.users[j].psk.bits_per_symbol();
            std::uint8_t bits[32];
            label_to_bits(gray_encode(static_cast<std::uint32_t>(combo.indices[j])), bits,
                          bits_per_symbol);
            decisions.per_user_bits[j].insert(decisions.per_user_bits[j].end(), bits,
                                              bits + bits_per_symbol);
        }
    }
    return decisions;
}

} // namespace ncsat
