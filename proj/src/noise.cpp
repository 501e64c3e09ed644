// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/noise.hpp"

#include <cmath>
#include <initializer_list>
#include <numbers>

namespace lightkit::noise {

uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t derive_key(uint64_t seed, uint64_t stream, uint64_t frame, uint64_t channel, uint64_t row,
                    uint64_t col) {
    uint64_t h = 0x4C49474854ull;  // domain salt
    for (uint64_t v : {seed, stream, frame, channel, row, col}) {
        h = mix64(h ^ v);
    }
    return h;
}

double uniform_from(uint64_t word) {
    // (0,1]: never 0, so log() below is always finite.
    return static_cast<double>((word >> 11) + 1) * 0x1.0p-53;
}

double gaussian(uint64_t seed, uint64_t stream, uint64_t frame, uint64_t channel, uint64_t row,
                uint64_t col) {
    const uint64_t key = derive_key(seed, stream, frame, channel, row, col);
    const double u1 = uniform_from(mix64(key ^ 0xA5A5A5A5A5A5A5A5ull));
    const double u2 = uniform_from(mix64(key ^ 0x5A5A5A5A5A5A5A5Aull));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lightkit::noise
