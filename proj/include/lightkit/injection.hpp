// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "lightkit/tensor.hpp"

namespace lightkit::inject {

struct InjectionConfig {
    double omega = 0.8;  // weight of the fresh noise inside the mask, in [0,1]
    uint64_t seed = 0;
    // Plain convex blend by default (variance omega^2 + (1-omega)^2 inside the
    // mask); set to rescale the blend back to unit variance.
    bool renormalize_variance = false;
};

/// Masked latent noise injection. Outside the mask the output is bit-identical
/// to the input; inside, each element becomes
///   omega * eps + (1 - omega) * latent
/// with eps a standard normal keyed by (seed, frame, channel, row, col).
/// Masks are F x 1 x h x w and broadcast over latent channels.
Tensor4 inject(const Tensor4& noisy_latents, const Tensor4& latent_masks,
               const InjectionConfig& cfg, int jobs = 1);

// Fixed low-pass used by the frequency-domain injection variant.
inline constexpr int kFrequencyModeOrder = 4;
inline constexpr double kFrequencyModeCutoff = 0.5;

/// Ablation variant: the masked noise field supplies the low frequencies and
/// the original latents the high frequencies, via the 3-D Butterworth fusion.
Tensor4 inject_frequency_mode(const Tensor4& noisy_latents, const Tensor4& latent_masks,
                              const InjectionConfig& cfg, int jobs = 1);

}  // namespace lightkit::inject
