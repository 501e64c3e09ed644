// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/injection.hpp"

#include <cmath>

#include "lightkit/freq_fusion.hpp"
#include "lightkit/noise.hpp"
#include "lightkit/parallel.hpp"

namespace lightkit::inject {

namespace {

void check_inputs(const Tensor4& latents, const Tensor4& masks, const InjectionConfig& cfg) {
    if (cfg.omega < 0.0 || cfg.omega > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "omega must lie in [0,1]");
    }
    if (masks.frames() != latents.frames() || masks.channels() != 1 ||
        masks.height() != latents.height() || masks.width() != latents.width()) {
        throw Error(ErrorCode::ShapeMismatch,
                    "masks must be F x 1 x h x w matching the latent frame geometry");
    }
    for (float v : masks.data()) {
        if (v != 0.0f && v != 1.0f) {
            throw Error(ErrorCode::NonBinaryMask, "mask elements must be exactly 0 or 1");
        }
    }
}

}  // namespace

Tensor4 inject(const Tensor4& noisy_latents, const Tensor4& latent_masks, const InjectionConfig& cfg,
               int jobs) {
    check_inputs(noisy_latents, latent_masks, cfg);
    Tensor4 out = noisy_latents;
    if (cfg.omega == 0.0) return out;

    const double omega = cfg.omega;
    const double keep = 1.0 - omega;
    const double scale =
        cfg.renormalize_variance ? 1.0 / std::sqrt(omega * omega + keep * keep) : 1.0;
    const int64_t channels = noisy_latents.channels();
    const int64_t height = noisy_latents.height();
    const int64_t width = noisy_latents.width();

    parallel_for(noisy_latents.frames(), jobs, [&](int64_t f) {
        for (int64_t y = 0; y < height; ++y) {
            for (int64_t x = 0; x < width; ++x) {
                if (latent_masks.at(f, 0, y, x) != 1.0f) continue;
                for (int64_t c = 0; c < channels; ++c) {
                    const double eps = noise::gaussian(cfg.seed, noise::kStreamInjection,
                                                       static_cast<uint64_t>(f),
                                                       static_cast<uint64_t>(c),
                                                       static_cast<uint64_t>(y),
                                                       static_cast<uint64_t>(x));
                    const double value =
                        (omega * eps + keep * static_cast<double>(noisy_latents.at(f, c, y, x))) *
                        scale;
                    out.at(f, c, y, x) = static_cast<float>(value);
                }
            }
        }
    });
    return out;
}

Tensor4 inject_frequency_mode(const Tensor4& noisy_latents, const Tensor4& latent_masks,
                              const InjectionConfig& cfg, int jobs) {
    const Tensor4 noise_field = inject(noisy_latents, latent_masks, cfg, jobs);
    const freq::ButterworthSpec spec{kFrequencyModeOrder, kFrequencyModeCutoff, kFrequencyModeCutoff};
    return freq::fuse(noise_field, noisy_latents, spec).tensor;
}

}  // namespace lightkit::inject
