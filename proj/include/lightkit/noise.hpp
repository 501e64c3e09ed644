// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace lightkit::noise {

// Counter-based generator: every variate is a pure function of
// (seed, stream, frame, channel, row, col), so tensors filled in any order or
// thread count come out identical. The mixer is the SplitMix64 finalizer;
// normals come from one Box-Muller evaluation on two derived uniforms.
// Golden vectors live in docs/noise.md and tests/test_noise.cpp.

// Stream tags keep independent consumers of the same run seed decorrelated.
inline constexpr uint64_t kStreamInjection = 0x4c4d49;          // light-map injection field
inline constexpr uint64_t kStreamForwardBase = 0x464e00000000;  // + depth, forward-noising fields

uint64_t mix64(uint64_t z);

/// Collapses the key tuple into one 64-bit state.
uint64_t derive_key(uint64_t seed, uint64_t stream, uint64_t frame, uint64_t channel, uint64_t row,
                    uint64_t col);

/// Uniform in (0,1], from the high 53 bits of a mixed word.
double uniform_from(uint64_t word);

/// Standard normal variate for one tensor position.
double gaussian(uint64_t seed, uint64_t stream, uint64_t frame, uint64_t channel, uint64_t row,
                uint64_t col);

}  // namespace lightkit::noise
