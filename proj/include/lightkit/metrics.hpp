// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lightkit/tensor.hpp"
#include "lightkit/trajectory.hpp"

namespace lightkit::metrics {

/// Identical-signal PSNR is reported as this cap instead of infinity.
inline constexpr double kPsnrCap = 99.0;

/// Pooled PSNR in dB against peak 1.0. With a mask (F x 1 x H x W, broadcast
/// over channels) only mask=1 positions contribute; an empty region is an error.
double psnr(const Tensor4& a, const Tensor4& b, const Tensor4* region_mask = nullptr);

/// Luminance-vs-white PSNR inside the light-map masks: per frame with a
/// non-empty mask, PSNR between luminance and the constant 1 signal over
/// mask=1 pixels; returns the mean over those frames.
double psnr_y(const Tensor4& result_video, const Tensor4& pixel_masks,
              const float luma_weights[3] = kLumaBt601,
              std::vector<double>* per_frame = nullptr);

enum class OverlayMode {
    Additive,  // clamp(source + gain * map, 0, 1)
    Alpha,     // (1 - a) * source + a, with a = clamp(gain * map, 0, 1)
};

Tensor4 overlay_light(const Tensor4& source_video, const Tensor4& light_maps, double gain = 1.0,
                      OverlayMode mode = OverlayMode::Additive);

/// Full-frame PSNR between the result and the light-map overlay of the source.
double psnr_light(const Tensor4& result_video, const Tensor4& source_video,
                  const Tensor4& light_maps, double gain = 1.0,
                  OverlayMode mode = OverlayMode::Additive);

/// Mean PSNR between consecutive frames; needs at least 2 frames.
double temporal_consistency(const Tensor4& video, std::vector<double>* per_pair = nullptr);

/// Mean distance between the luminance-weighted centroid of each frame's
/// top-decile-brightness pixels and the interpolated center of the
/// trajectory's first source, as a fraction of frame width. Near-black frames
/// are excluded from the mean (NaN in the per-frame breakdown).
double centroid_track_error(const Tensor4& result_video, const traj::TrajectorySpec& trajectory,
                            std::vector<double>* per_frame = nullptr);

struct MetricReport {
    double psnr_y = 0.0;
    double psnr_light = 0.0;
    double temporal_consistency = 0.0;
    double centroid_track_error = 0.0;
    std::vector<double> psnr_y_per_frame;
    std::vector<double> temporal_per_pair;
    std::vector<double> centroid_error_per_frame;

    std::string to_json() const;
};

MetricReport evaluate(const Tensor4& result_video, const Tensor4& source_video,
                      const traj::TrajectorySpec& trajectory, double mask_threshold,
                      double overlay_gain = 1.0, const float luma_weights[3] = kLumaBt601);

}  // namespace lightkit::metrics
