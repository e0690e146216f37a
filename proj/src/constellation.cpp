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

#include "ncsat/constellation.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ncsat {

int PskConstellation::bits_per_symbol() const
{
    if (order < 2 || (order & (order - 1)) != 0)
        throw std::invalid_argument("bits_per_symbol: PSK order " + std::to_string(order) +
                                    " is not a power of two");
    int k = 0;
    for (int m = order; m > 1; m >>= 1)
        ++k;
    return k;
}

PskConstellation make_psk(int order, double rotation)
{
    if (order < 2)
        throw std::invalid_argument("make_psk: order must be >= 2, got " + std::to_string(order));

    PskConstellation c;
    c.order = order;
    c.rotation = rotation;
    c.points.reserve(static_cast<std::size_t>(order));
    for (int m = 0; m < order; ++m) {
        const double angle = 2.0 * kPi * m / order + rotation;
        c.points.emplace_back(std::cos(angle), std::sin(angle));
    }
    return c;
}

std::vector<double> assign_rotations(int num_users, int order)
{
    if (num_users < 1)
        throw std::invalid_argument("assign_rotations: num_users must be >= 1");
    if (order < 2)
        throw std::invalid_argument("assign_rotations: order must be >= 2");

    std::vector<double> rotations(static_cast<std::size_t>(num_users));
    for (int j = 0; j < num_users; ++j)
        rotations[static_cast<std::size_t>(j)] = 2.0 * kPi * j / (static_cast<double>(order) * num_users);
    return rotations;
}

UserConstellationSet make_user_set(int num_users, int order, const std::vector<double>& rotations,
                                   const std::vector<double>& powers)
{
    if (rotations.size() != static_cast<std::size_t>(num_users))
        throw std::invalid_argument("make_user_set: rotation count does not match user count");
    if (powers.size() != static_cast<std::size_t>(num_users))
        throw std::invalid_argument("make_user_set: power count does not match user count");

    UserConstellationSet set;
    set.users.reserve(static_cast<std::size_t>(num_users));
    for (int j = 0; j < num_users; ++j) {
        const double p = powers[static_cast<std::size_t>(j)];
        if (p < 0.0)
            throw std::invalid_argument("make_user_set: power weight must be >= 0");
        set.users.push_back({j, make_psk(order, rotations[static_cast<std::size_t>(j)]), p});
    }
    return set;
}

JointConstellation build_joint(const UserConstellationSet& set)
{
    const int num_users = set.size();
    if (num_users < 1)
        throw std::invalid_argument("build_joint: empty user set");

    std::size_t total = 1;
    for (const auto& user : set.users)
        total *= static_cast<std::size_t>(user.psk.order);

    JointConstellation joint;
    joint.entries.reserve(total);

    // Odometer over per-user symbol indices, user 0 most significant, so
    // entries land in lexicographic combo order.
    std::vector<int> combo(static_cast<std::size_t>(num_users), 0);
    for (std::size_t e = 0; e < total; ++e) {
        cplx point{0.0, 0.0};
        for (int j = 0; j < num_users; ++j) {
            const auto& user = set.users[static_cast<std::size_t>(j)];
            point += user.power * user.psk.point(combo[static_cast<std::size_t>(j)]);
        }
        joint.entries.push_back({SymbolIndexCombo{combo}, point});

        for (int j = num_users - 1; j >= 0; --j) {
            auto& digit = combo[static_cast<std::size_t>(j)];
            if (++digit < set.users[static_cast<std::size_t>(j)].psk.order)
                break;
            digit = 0;
        }
    }

    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a + 1 < joint.entries.size(); ++a)
        for (std::size_t b = a + 1; b < joint.entries.size(); ++b)
            min_dist = std::min(min_dist, std::abs(joint.entries[a].point - joint.entries[b].point));
    joint.min_distance = joint.entries.size() > 1 ? min_dist : std::numeric_limits<double>::infinity();

    return joint;
}

std::size_t demap_joint_index(cplx z, const JointConstellation& joint)
{
    if (!joint.valid())
        throw invalid_constellation("demap_joint: joint constellation is degenerate (min distance " +
                                    std::to_string(joint.min_distance) + ")");

    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < joint.entries.size(); ++e) {
        const double d2 = std::norm(z - joint.entries[e].point);
        if (d2 < best_d2) { // strict: first (lowest lexicographic) combo wins ties
            best_d2 = d2;
            best = e;
        }
    }
    return best;
}

const SymbolIndexCombo& demap_joint(cplx z, const JointConstellation& joint)
{
    return joint.entries[demap_joint_index(z, joint)].combo;
}

std::uint32_t bits_to_label(const std::uint8_t* bits, int count)
{
    std::uint32_t label = 0;
    for (int b = 0; b < count; ++b)
        label = (label << 1) | (bits[b] & 1u);
    return label;
}

void label_to_bits(std::uint32_t label, std::uint8_t* bits, int count)
{
    for (int b = 0; b < count; ++b)
        bits[b] = static_cast<std::uint8_t>((label >> (count - 1 - b)) & 1u);
}

} // namespace ncsat
