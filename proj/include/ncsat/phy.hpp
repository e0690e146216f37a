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
#include <span>
#include <vector>

#include "ncsat/channel.hpp"
#include "ncsat/constellation.hpp"
#include "ncsat/rng.hpp"

namespace ncsat {

// One user's frame: N information symbols from the user's PSK alphabet and
// their differentially encoded transmit stream x[0..N], x[0] the reference.
// info_bits is the Gray-coded bit stream behind the symbols.
struct Frame {
    int user_id = 0;
    std::vector<std::uint8_t> info_bits;
    std::vector<cplx> info_symbols; // s[1..N]
    std::vector<cplx> tx_symbols;   // x[0..N], x[n] = x[n-1] * s[n]

    int length() const { return static_cast<int>(info_symbols.size()); }
};

// Differential encoding: output[0] = reference, output[n] = output[n-1]*info[n-1+1].
// All inputs must be unit magnitude (PSK), which the product chain preserves.
std::vector<cplx> diff_encode(std::span<const cplx> info_symbols, cplx reference);

// Builds a frame from an explicit Gray-coded bit stream
// (bits.size() must be a multiple of the alphabet's bits per symbol).
Frame make_frame(int user_id, const PskConstellation& psk, std::vector<std::uint8_t> bits);

// Random-payload frame of n_symbols symbols.
Frame random_frame(int user_id, const PskConstellation& psk, int n_symbols, Rng& rng);

// R x (N+1) receive matrix, column n = received vector at slot n.
struct ReceivedBlock {
    std::size_t rows = 0; // R antennas
    std::size_t cols = 0; // N+1 slots
    std::vector<cplx> y;  // column-major
    double noise_variance = 0.0;

    std::span<const cplx> column(std::size_t n) const { return {y.data() + n * rows, rows}; }
    std::span<cplx> column(std::size_t n) { return {y.data() + n * rows, rows}; }
};

// y[:, n] = exp(i*doppler_drift*n) * sum_j h_j x_j[n] + w[:, n] with w
// i.i.d. CN(0, noise_variance). No noise is drawn when noise_variance == 0.
ReceivedBlock transmit_through(const std::vector<Frame>& frames, const ChannelMatrix& channel,
                               double noise_variance, double doppler_drift, Rng& rng);

// Correlation statistic of two consecutive receive vectors:
// (1/R) * sum_i conj(y_prev[i]) * y_curr[i]. Static per-antenna phases
// cancel in the conjugate product, which is what makes the detector
// channel-estimation-free.
cplx rx_statistic(std::span<const cplx> y_prev, std::span<const cplx> y_curr);

struct DecisionSequence {
    std::vector<cplx> z;                             // N statistics
    std::vector<SymbolIndexCombo> combos;            // N joint decisions
    std::vector<std::vector<std::uint8_t>> per_user_bits; // J Gray-decoded streams
};

// Full frame detection: z[n] per slot pair, nearest joint point, per-user
// symbol split, Gray decode.
DecisionSequence detect_frame(const ReceivedBlock& block, const JointConstellation& joint,
                              const UserConstellationSet& set);

} // namespace ncsat
