// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <variant>
#include <vector>

#include "lightkit/tensor.hpp"

namespace lightkit::traj {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct LinearPattern {
    Vec2 start;
    Vec2 end;
};

struct CircularPattern {
    Vec2 center;
    double orbit_radius = 0.0;
    double start_angle = 0.0;  // radians
    double end_angle = 0.0;
};

struct PolylinePattern {
    std::vector<Vec2> waypoints;  // >= 2 points
};

using Pattern = std::variant<LinearPattern, CircularPattern, PolylinePattern>;

/// One moving light source. Coordinates are normalized to [0,1]^2 with y down;
/// radii are fractions of min(H, W).
struct SourceTrack {
    Pattern pattern;
    double radius_start = 0.25;
    double radius_end = 0.25;
    double intensity = 1.0;
};

struct TrajectorySpec {
    std::vector<SourceTrack> sources;
    int64_t frame_count = 1;
};

/// Per-frame, per-source interpolated state.
struct SourceState {
    Vec2 center;
    double radius = 0.0;
    double intensity = 0.0;
};

enum class Falloff {
    Linear,    // clamp(1 - d, 0, 1), hard zero at the nominal radius
    Gaussian,  // exp(-2 d^2), soft skirt beyond the nominal radius
};

/// Grayscale maps at pixel resolution plus binary masks at pixel and latent scale.
struct LightMapSequence {
    Tensor4 maps;          // F x 1 x H x W, values in [0,1]
    Tensor4 masks_pixel;   // F x 1 x H x W, exactly {0,1}
    Tensor4 masks_latent;  // F x 1 x H/s x W/s, exactly {0,1}
};

void validate(const TrajectorySpec& spec);

/// Frame k of n uses parameter u = k/(n-1) (u = 0 when n = 1). Linear and
/// circular patterns interpolate position/angle linearly; polylines are
/// interpolated uniformly by arc length. Radii interpolate linearly.
std::vector<std::vector<SourceState>> interpolate(const TrajectorySpec& spec);

/// Normalized coordinate -> continuous pixel coordinate (grid-point convention:
/// 0 maps to pixel 0 and 1 maps to the last pixel).
inline double pixel_of_norm(double v, int64_t extent) {
    return v * static_cast<double>(extent - 1);
}

/// One light map frame: per pixel, intensity * max over sources of
/// falloff(distance / radius_px) with radius_px = radius * min(H, W).
Tensor4 rasterize(const std::vector<SourceState>& states, int64_t height, int64_t width,
                  Falloff falloff = Falloff::Linear);

/// Pixel mask = 1 where map >= threshold (inclusive). Latent mask cell = 1
/// where at least half the pixels of its scale x scale block are set.
Tensor4 binarize_pixel(const Tensor4& maps, double threshold);
Tensor4 binarize_latent(const Tensor4& masks_pixel, int scale);

/// Full map/mask generation for a clip. H and W must divide by `scale`.
LightMapSequence generate(const TrajectorySpec& spec, int64_t height, int64_t width,
                          double mask_threshold, int latent_scale,
                          Falloff falloff = Falloff::Linear);

TrajectorySpec parse_spec_json(const std::string& json_text);
TrajectorySpec load_spec(const std::filesystem::path& path);

}  // namespace lightkit::traj
