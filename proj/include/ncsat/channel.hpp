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

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "ncsat/rng.hpp"
#include "ncsat/types.hpp"

namespace ncsat {

inline constexpr double kEarthRadiusM = 6371000.0;

// Square uniform rectangular array, n_ele elements per side, centered on the
// origin of its own x-y plane. Element order is row-major (y outer, x inner).
struct ArrayGeometry {
    int n_ele = 0;
    double spacing_wavelengths = 0.5;
    double wavelength = 0.0;
    std::vector<std::array<double, 2>> positions; // meters in the array plane

    int size() const { return n_ele * n_ele; }
};

ArrayGeometry ura_positions(int n_ele, double spacing_wavelengths, double wavelength);

// Straight-line satellite-to-user distance. The sub-satellite point is fixed
// at latitude/longitude (0, 0); the central angle to the user follows the
// spherical law of cosines.
double slant_range(double sat_altitude_m, double user_lat_rad, double user_lon_rad);

// Free-space path loss as a linear power gain: (lambda / 4*pi*d)^2.
double path_loss(double wavelength_m, double distance_m);

// One satellite-user link. `direction` is the unit vector from the array
// toward the user, expressed in the array frame: the array occupies the x-y
// plane and boresight (nadir for an earthward-looking payload) is +z.
struct LinkGeometry {
    double sat_altitude_m = 0.0;
    double user_lat_rad = 0.0;
    double user_lon_rad = 0.0;
    double wavelength_m = 0.0;
    double slant_range_m = 0.0;
    Vec3 direction{0.0, 0.0, 1.0};
};

LinkGeometry make_link(double sat_altitude_m, double user_lat_rad, double user_lon_rad,
                       double wavelength_m);

// Planar-array pattern coefficient of one isotropic element:
// exp(i * (2*pi/lambda) * <element position, in-plane direction>).
// `direction` must be unit length; only its x-y components contribute.
cplx steering_coeff(const std::array<double, 2>& element_pos_m, const Vec3& direction,
                    double wavelength_m);

struct ChannelParams {
    std::vector<double> tx_gain;     // linear per-user transmit gain
    double rician_factor = 0.0;      // LoS/NLoS power ratio; 0 = pure multipath, +inf = pure LoS
    double phase_noise_bound = 0.0;  // per-antenna static phase, uniform on [-bound, bound]
    bool normalize = true;           // true: unit average per-user power; false: absolute link budget
};

// R x J channel matrix, column-major so each user's channel vector is
// contiguous.
struct ChannelMatrix {
    std::size_t rows = 0; // R antennas
    std::size_t cols = 0; // J users
    std::vector<cplx> h;
    ChannelParams params;
    std::vector<double> per_user_power; // (1/R) * sum_i |h_ij|^2

    cplx& at(std::size_t i, std::size_t j) { return h[j * rows + i]; }
    const cplx& at(std::size_t i, std::size_t j) const { return h[j * rows + i]; }
    std::span<const cplx> column(std::size_t j) const { return {h.data() + j * rows, rows}; }
    std::span<cplx> column(std::size_t j) { return {h.data() + j * rows, rows}; }
};

// Draws one block-fading channel realization. Per user: a deterministic
// carrier phase exp(-i*2*pi*d/lambda), a per-antenna static phase-noise
// rotation, an amplitude of sqrt(G * path_loss) (1 in normalized mode), and
// a Rician mix of the steering coefficient with i.i.d. CN(0,1) scattering.
// Draw order is fixed (users outer, antennas inner; phase before scatter),
// so a given rng seed always yields the same matrix.
ChannelMatrix draw_channel(const ArrayGeometry& array, const std::vector<LinkGeometry>& links,
                           const ChannelParams& params, Rng& rng);

} // namespace ncsat
