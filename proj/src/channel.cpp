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

#include "ncsat/channel.hpp"

#include <cmath>
#include <string>

namespace ncsat {

ArrayGeometry ura_positions(int n_ele, double spacing_wavelengths, double wavelength)
{
    if (n_ele < 1)
        throw std::invalid_argument("ura_positions: n_ele must be >= 1");
    if (spacing_wavelengths <= 0.0 || wavelength <= 0.0)
        throw std::invalid_argument("ura_positions: spacing and wavelength must be positive");

    ArrayGeometry array;
    array.n_ele = n_ele;
    array.spacing_wavelengths = spacing_wavelengths;
    array.wavelength = wavelength;

    const double pitch = spacing_wavelengths * wavelength;
    const double center = 0.5 * (n_ele - 1);
    array.positions.reserve(static_cast<std::size_t>(n_ele) * n_ele);
    for (int iy = 0; iy < n_ele; ++iy)
        for (int ix = 0; ix < n_ele; ++ix)
            array.positions.push_back({(ix - center) * pitch, (iy - center) * pitch});
    return array;
}

double slant_range(double sat_altitude_m, double user_lat_rad, double user_lon_rad)
{
    if (sat_altitude_m <= 0.0)
        throw std::invalid_argument("slant_range: altitude must be positive");
    if (std::abs(user_lat_rad) > kPi / 2.0)
        throw std::invalid_argument("slant_range: |latitude| must be <= pi/2");

    // cos of the central angle between the user and the (0, 0) sub-satellite
    // point, spherical law of cosines.
    const double cos_gamma = std::cos(user_lat_rad) * std::cos(user_lon_rad);
    const double orbit = kEarthRadiusM + sat_altitude_m;
    const double d2 =
        kEarthRadiusM * kEarthRadiusM + orbit * orbit - 2.0 * kEarthRadiusM * orbit * cos_gamma;
    return std::sqrt(d2);
}

double path_loss(double wavelength_m, double distance_m)
{
    if (wavelength_m <= 0.0 || distance_m <= 0.0)
        throw std::invalid_argument("path_loss: wavelength and distance must be positive");
    const double ratio = wavelength_m / (4.0 * kPi * distance_m);
    return ratio * ratio;
}

LinkGeometry make_link(double sat_altitude_m, double user_lat_rad, double user_lon_rad,
                       double wavelength_m)
{
    if (wavelength_m <= 0.0)
        throw std::invalid_argument("make_link: wavelength must be positive");

    LinkGeometry link;
    link.sat_altitude_m = sat_altitude_m;
    link.user_lat_rad = user_lat_rad;
    link.user_lon_rad = user_lon_rad;
    link.wavelength_m = wavelength_m;
    link.slant_range_m = slant_range(sat_altitude_m, user_lat_rad, user_lon_rad);

    // Earth-centered frame: x toward the sub-satellite point, y east, z north.
    // Array frame: x-y plane holds the elements, +z is boresight (nadir), so
    // array (x, y, z) = earth (y, z, -x).
    const Vec3 sat{kEarthRadiusM + sat_altitude_m, 0.0, 0.0};
    const Vec3 user{kEarthRadiusM * std::cos(user_lat_rad) * std::cos(user_lon_rad),
                    kEarthRadiusM * std::cos(user_lat_rad) * std::sin(user_lon_rad),
                    kEarthRadiusM * std::sin(user_lat_rad)};
    const Vec3 to_user = normalized({user.x - sat.x, user.y - sat.y, user.z - sat.z});
    link.direction = {to_user.y, to_user.z, -to_user.x};
    return link;
}

cplx steering_coeff(const std::array<double, 2>& element_pos_m, const Vec3& direction,
                    double wavelength_m)
{
    if (std::abs(norm(direction) - 1.0) > 1e-9)
        throw std::invalid_argument("steering_coeff: direction must be a unit vector");

    const double phase =
        2.0 * kPi / wavelength_m * (element_pos_m[0] * direction.x + element_pos_m[1] * direction.y);
    return {std::cos(phase), std::sin(phase)};
}

ChannelMatrix draw_channel(const ArrayGeometry& array, const std::vector<LinkGeometry>& links,
                           const ChannelParams& params, Rng& rng)
{
    const std::size_t num_rx = static_cast<std::size_t>(array.size());
    const std::size_t num_users = links.size();
    if (num_users == 0)
        throw std::invalid_argument("draw_channel: no links");
    if (params.tx_gain.size() != num_users)
        throw std::invalid_argument("draw_channel: tx_gain count does not match link count");
    if (params.rician_factor < 0.0)
        throw std::invalid_argument("draw_channel: rician_factor must be >= 0");
    if (params.phase_noise_bound < 0.0)
        throw std::invalid_argument("draw_channel: phase_noise_bound must be >= 0");

    const bool pure_los = std::isinf(params.rician_factor);
    const double los_weight =
        pure_los ? 1.0 : std::sqrt(params.rician_factor / (params.rician_factor + 1.0));
    const double nlos_weight = pure_los ? 0.0 : std::sqrt(1.0 / (params.rician_factor + 1.0));

    ChannelMatrix mat;
    mat.rows = num_rx;
    mat.cols = num_users;
    mat.h.resize(num_rx * num_users);
    mat.params = params;
    mat.per_user_power.resize(num_users);

    for (std::size_t j = 0; j < num_users; ++j) {
        const LinkGeometry& link = links[j];
        const double carrier_phase = -2.0 * kPi * link.slant_range_m / link.wavelength_m;
        const cplx carrier{std::cos(carrier_phase), std::sin(carrier_phase)};
        const double amplitude =
            params.normalize
                ? 1.0
                : std::sqrt(params.tx_gain[j] * path_loss(link.wavelength_m, link.slant_range_m));

        double power_sum = 0.0;
        for (std::size_t i = 0; i < num_rx; ++i) {
            // Same draw count per element regardless of parameters, so one
            // seed yields one fading realization family across L sweeps.
            const double phase_noise = rng.uniform_pm(params.phase_noise_bound);
            const cplx scatter = rng.complex_gaussian();

            const cplx pattern = steering_coeff(array.positions[i], link.direction, link.wavelength_m);
            const cplx rotation{std::cos(phase_noise), -std::sin(phase_noise)};
            const cplx coeff =
                carrier * rotation * amplitude * (los_weight * pattern + nlos_weight * scatter);
            mat.at(i, j) = coeff;
            power_sum += std::norm(coeff);
        }
        mat.per_user_power[j] = power_sum / static_cast<double>(num_rx);
    }
    return mat;
}

} // namespace ncsat
