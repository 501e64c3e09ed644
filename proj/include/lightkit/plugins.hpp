// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>

#include "lightkit/tensor.hpp"
#include "lightkit/trajectory.hpp"

namespace lightkit::plugins {

/// Video <-> latent transform. Spatial dims divide by latent_scale().
class Codec {
public:
    virtual ~Codec() = default;
    virtual Tensor4 encode(const Tensor4& video) = 0;
    virtual Tensor4 decode(const Tensor4& latents) = 0;
    virtual int latent_scale() const = 0;
};

/// Predicts the clean latent from a noisy one at a given denoising step.
class Denoiser {
public:
    virtual ~Denoiser() = default;
    virtual Tensor4 predict_z0(const Tensor4& z_t, int step, const traj::LightMapSequence& maps,
                               const std::string& prompt) = 0;
    /// Called by the pipeline after each step's fusion result is re-encoded.
    virtual void observe_fused(const Tensor4& /*z_bar*/, int /*step*/) {}
};

/// Frame-wise relighting conditioned on a light map.
class Relighter {
public:
    virtual ~Relighter() = default;
    /// frame: 1 x 3 x H x W, light_map: 1 x 1 x H x W.
    virtual Tensor4 relight(const Tensor4& frame, const Tensor4& light_map, int64_t frame_index,
                            const std::string& prompt) = 0;
    /// Whole-clip convenience; backends that batch internally may override.
    virtual Tensor4 relight_clip(const Tensor4& frames, const Tensor4& light_maps,
                                 const std::string& prompt, int jobs);
};

/// Per-frame surface normal maps for a video, encoded (n + 1) / 2.
class NormalSource {
public:
    virtual ~NormalSource() = default;
    virtual Tensor4 normals(const Tensor4& video) = 0;
};

// ---------------------------------------------------------------------------
// Reference implementations (analytic, CPU-only).

/// Latents are area-downsampled RGB at the configured scale; decode is a
/// nearest-neighbour upsample. Scale 1 is a true identity.
class IdentityCodec : public Codec {
public:
    explicit IdentityCodec(int scale);
    Tensor4 encode(const Tensor4& video) override;
    Tensor4 decode(const Tensor4& latents) override;
    int latent_scale() const override { return scale_; }

private:
    int scale_;
};

/// Noise-free prediction: returns the clean latent of the previous fusion
/// step. At step 0, where no fusion has happened yet, it inverts the known
/// keyed forward noising, so deviations injected into the initial latents
/// survive into the first prediction.
class OracleDenoiser : public Denoiser {
public:
    OracleDenoiser(uint64_t seed, int total_steps, double gamma_end);
    Tensor4 predict_z0(const Tensor4& z_t, int step, const traj::LightMapSequence& maps,
                       const std::string& prompt) override;
    void observe_fused(const Tensor4& z_bar, int step) override;

private:
    uint64_t seed_;
    int total_steps_;
    double gamma_end_;
    std::optional<Tensor4> held_;
};

struct LambertianParams {
    double ambient = 0.30;
    double light_gain = 2.0;  // local brightness boost scale inside the light map
};

/// Desk-scale stand-in for a relighting model. The light direction comes from
/// the light map's intensity centroid projected to a hemisphere; shading
/// normals are decoded from the input frame itself (2 rgb - 1), so whatever
/// structure the input carries (normal-map content, appearance, noise) steers
/// the shading; albedo comes from the configured scene frames.
class LambertianRelighter : public Relighter {
public:
    LambertianRelighter(Tensor4 albedo_frames, LambertianParams params = {});
    Tensor4 relight(const Tensor4& frame, const Tensor4& light_map, int64_t frame_index,
                    const std::string& prompt) override;

private:
    Tensor4 albedo_;
    LambertianParams params_;
};

/// Returns pre-computed ground-truth normal frames for the synthetic scene.
class AnalyticNormalSource : public NormalSource {
public:
    explicit AnalyticNormalSource(Tensor4 normal_frames);
    Tensor4 normals(const Tensor4& video) override;

private:
    Tensor4 normals_;
};

/// Treats the video itself as its normal encoding; makes geometry fusion a
/// no-op by partition of unity.
class IdentityNormalSource : public NormalSource {
public:
    Tensor4 normals(const Tensor4& video) override { return video; }
};

class IdentityRelighter : public Relighter {
public:
    Tensor4 relight(const Tensor4& frame, const Tensor4&, int64_t, const std::string&) override {
        return frame;
    }
};

}  // namespace lightkit::plugins
