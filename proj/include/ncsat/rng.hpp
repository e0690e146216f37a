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

#include "ncsat/types.hpp"

namespace ncsat {

// Deterministic, platform-independent random streams. Simulation results
// must be bit-identical for a given seed regardless of toolchain, so the
// generator and all variate transforms are implemented here instead of
// relying on std:: distributions (whose output is implementation-defined).

inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ seeded through splitmix64.
class Rng {
  public:
    explicit Rng(std::uint64_t seed)
    {
        for (auto& word : state_)
            word = splitmix64(seed);
    }

    std::uint64_t next_u64()
    {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe under log().
    double uniform01_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Uniform on [-bound, bound]; exact 0 when bound == 0.
    double uniform_pm(double bound) { return (2.0 * uniform01() - 1.0) * bound; }

    // Circularly symmetric complex Gaussian, unit total variance:
    // magnitude^2 ~ Exp(1), phase uniform. Consumes two draws.
    cplx complex_gaussian()
    {
        const double mag = std::sqrt(-std::log(uniform01_open()));
        const double phase = 2.0 * kPi * uniform01();
        return {mag * std::cos(phase), mag * std::sin(phase)};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

// Order-independent derivation of per-work-unit seeds: chained splitmix64
// over the identifying values. Used so that every Monte Carlo frame owns a
// stream that depends only on (master seed, point identity, frame index),
// never on scheduling.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d)
{
    std::uint64_t s = a;
    std::uint64_t h = splitmix64(s);
    s ^= b + 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(s);
    s ^= c + 0xbf58476d1ce4e5b9ULL;
    h ^= splitmix64(s);
    s ^= d + 0x94d049bb133111ebULL;
    h ^= splitmix64(s);
    return h;
}

} // namespace ncsat
