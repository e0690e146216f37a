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
#include <stdexcept>
#include <vector>

#include "ncsat/types.hpp"

namespace ncsat {

// Thrown when a joint constellation is degenerate (colliding points) and a
// detector refuses to use it.
class invalid_constellation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A joint constellation whose minimum distance falls below this threshold is
// considered degenerate: it guards exact collisions without rejecting
// legitimately tight designs.
inline constexpr double kMinJointDistance = 1e-9;

// M-ary PSK alphabet rotated by a fixed angle. Point m sits at
// exp(i(2*pi*m/M + rotation)); all points are unit magnitude and listed in
// index order.
struct PskConstellation {
    int order = 0;
    double rotation = 0.0;
    std::vector<cplx> points;

    const cplx& point(int m) const { return points[static_cast<std::size_t>(m)]; }

    // log2(order); only meaningful for power-of-two orders.
    int bits_per_symbol() const;
};

PskConstellation make_psk(int order, double rotation);

// Rotation offsets 2*pi*(j-1)/(M*J) for j = 1..J. The union of all users'
// alphabets is then a uniform (M*J)-point PSK, which keeps every pair of
// individual constellations maximally separated in angle.
std::vector<double> assign_rotations(int num_users, int order);

struct UserConstellation {
    int user_id = 0;
    PskConstellation psk;
    double power = 1.0; // per-user power weight, linear
};

struct UserConstellationSet {
    std::vector<UserConstellation> users;

    int size() const { return static_cast<int>(users.size()); }
};

// Convenience builder: users 0..J-1 share a PSK order; rotations and power
// weights are per user (rotations.size() == powers.size() == J).
UserConstellationSet make_user_set(int num_users, int order, const std::vector<double>& rotations,
                                   const std::vector<double>& powers);

// One symbol index per user, user 0 first.
struct SymbolIndexCombo {
    std::vector<int> indices;

    bool operator==(const SymbolIndexCombo&) const = default;
};

struct JointEntry {
    SymbolIndexCombo combo;
    cplx point;
};

// Superposition alphabet seen by the non-coherent receiver: every
// combination of one symbol per user, weighted by the user power weights.
// Entries are stored in lexicographic combo order (user 0 most significant).
struct JointConstellation {
    std::vector<JointEntry> entries;
    double min_distance = 0.0;

    bool valid() const { return min_distance >= kMinJointDistance; }
    std::size_t size() const { return entries.size(); }
};

JointConstellation build_joint(const UserConstellationSet& set);

// Nearest-point demapping of a receive statistic onto the joint alphabet.
// Ties break toward the lowest lexicographic combo. Throws
// invalid_constellation when the joint alphabet is degenerate.
std::size_t demap_joint_index(cplx z, const JointConstellation& joint);
const SymbolIndexCombo& demap_joint(cplx z, const JointConstellation& joint);

// Binary-reflected Gray code between symbol indices and bit labels.
// Adjacent PSK indices (mod M) differ in exactly one label bit.
inline std::uint32_t gray_encode(std::uint32_t index) { return index ^ (index >> 1); }

inline std::uint32_t gray_decode(std::uint32_t label)
{
    std::uint32_t index = label;
    index ^= index >> 16;
    index ^= index >> 8;
    index ^= index >> 4;
    index ^= index >> 2;
    index ^= index >> 1;
    return index;
}

// MSB-first bit I/O for k-bit symbol labels.
std::uint32_t bits_to_label(const std::uint8_t* bits, int count);
void label_to_bits(std::uint32_t label, std::uint8_t* bits, int count);

} // namespace ncsat
