// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/plugins.hpp"

#include <algorithm>
#include <cmath>

#include "lightkit/noise.hpp"
#include "lightkit/parallel.hpp"

namespace lightkit::plugins {

Tensor4 Relighter::relight_clip(const Tensor4& frames, const Tensor4& light_maps,
                                const std::string& prompt, int jobs) {
    if (light_maps.frames() != frames.frames() || light_maps.height() != frames.height() ||
        light_maps.width() != frames.width()) {
        throw Error(ErrorCode::ShapeMismatch, "light maps do not match the clip geometry");
    }
    Tensor4 out(frames.frames(), frames.channels(), frames.height(), frames.width());
    parallel_for(frames.frames(), jobs, [&](int64_t f) {
        out.set_frame(f, relight(frames.frame(f), light_maps.frame(f), f, prompt));
    });
    return out;
}

IdentityCodec::IdentityCodec(int scale) : scale_(scale) {
    if (scale < 1) {
        throw Error(ErrorCode::InvalidArgument, "codec scale must be >= 1");
    }
}

Tensor4 IdentityCodec::encode(const Tensor4& video) { return resample_area(video, scale_); }

Tensor4 IdentityCodec::decode(const Tensor4& latents) { return upsample_nearest(latents, scale_); }

OracleDenoiser::OracleDenoiser(uint64_t seed, int total_steps, double gamma_end)
    : seed_(seed), total_steps_(total_steps), gamma_end_(gamma_end) {}

Tensor4 OracleDenoiser::predict_z0(const Tensor4& z_t, int /*step*/,
                                   const traj::LightMapSequence& /*maps*/,
                                   const std::string& /*prompt*/) {
    if (held_.has_value()) {
        return *held_;
    }
    // Invert z = sqrt(g) z0 + sqrt(1-g) eps using the keyed noise field the
    // pipeline used at full depth.
    const double gamma = gamma_end_;
    if (gamma >= 1.0) return z_t;
    const double inv_sqrt_g = 1.0 / std::sqrt(gamma);
    const double sqrt_1mg = std::sqrt(1.0 - gamma);
    const uint64_t stream = noise::kStreamForwardBase + static_cast<uint64_t>(total_steps_);
    Tensor4 out(z_t.frames(), z_t.channels(), z_t.height(), z_t.width());
    for (int64_t f = 0; f < z_t.frames(); ++f) {
        for (int64_t c = 0; c < z_t.channels(); ++c) {
            for (int64_t y = 0; y < z_t.height(); ++y) {
                for (int64_t x = 0; x < z_t.width(); ++x) {
                    const double eps =
                        noise::gaussian(seed_, stream, static_cast<uint64_t>(f),
                                        static_cast<uint64_t>(c), static_cast<uint64_t>(y),
                                        static_cast<uint64_t>(x));
                    out.at(f, c, y, x) = static_cast<float>(
                        (static_cast<double>(z_t.at(f, c, y, x)) - sqrt_1mg * eps) * inv_sqrt_g);
                }
            }
        }
    }
    return out;
}

void OracleDenoiser::observe_fused(const Tensor4& z_bar, int /*step*/) { held_ = z_bar; }

LambertianRelighter::LambertianRelighter(Tensor4 albedo_frames, LambertianParams params)
    : albedo_(std::move(albedo_frames)), params_(params) {
    if (albedo_.channels() != 3) {
        throw Error(ErrorCode::InvalidArgument, "albedo frames must have 3 channels");
    }
}

Tensor4 LambertianRelighter::relight(const Tensor4& frame, const Tensor4& light_map,
                                     int64_t frame_index, const std::string& /*prompt*/) {
    const int64_t H = frame.height(), W = frame.width();
    if (frame.frames() != 1 || frame.channels() != 3 || light_map.height() != H ||
        light_map.width() != W) {
        throw Error(ErrorCode::ShapeMismatch, "relight expects one RGB frame and a matching map");
    }
    if (frame_index < 0 || frame_index >= albedo_.frames() || albedo_.height() != H ||
        albedo_.width() != W) {
        throw Error(ErrorCode::ShapeMismatch, "no albedo frame matching the clip geometry");
    }

    // Light direction above the map's intensity centroid; straight overhead
    // for an empty map.
    double wsum = 0.0, xsum = 0.0, ysum = 0.0;
    for (int64_t y = 0; y < H; ++y) {
        for (int64_t x = 0; x < W; ++x) {
            const double v = light_map.at(0, 0, y, x);
            wsum += v;
            xsum += v * static_cast<double>(x);
            ysum += v * static_cast<double>(y);
        }
    }
    double l[3] = {0.0, 0.0, 1.0};
    if (wsum > 1e-9) {
        const double cx = xsum / wsum / static_cast<double>(W - 1);
        const double cy = ysum / wsum / static_cast<double>(H - 1);
        l[0] = 2.0 * cx - 1.0;
        l[1] = 2.0 * cy - 1.0;
        l[2] = 1.0;
        const double n = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
        l[0] /= n;
        l[1] /= n;
        l[2] /= n;
    }

    Tensor4 out(1, 3, H, W);
    const double ambient = params_.ambient;
    for (int64_t y = 0; y < H; ++y) {
        for (int64_t x = 0; x < W; ++x) {
            double n[3];
            double norm = 0.0;
            for (int c = 0; c < 3; ++c) {
                n[c] = 2.0 * static_cast<double>(frame.at(0, c, y, x)) - 1.0;
                norm += n[c] * n[c];
            }
            double ndotl;
            if (norm > 1e-12) {
                norm = std::sqrt(norm);
                ndotl = (n[0] * l[0] + n[1] * l[1] + n[2] * l[2]) / norm;
            } else {
                ndotl = l[2];
            }
            const double shading = ambient + (1.0 - ambient) * std::max(0.0, ndotl);
            const double gain = 1.0 + params_.light_gain * light_map.at(0, 0, y, x);
            for (int c = 0; c < 3; ++c) {
                const double v = albedo_.at(frame_index, c, y, x) * shading * gain;
                out.at(0, c, y, x) = static_cast<float>(std::clamp(v, 0.0, 1.0));
            }
        }
    }
    return out;
}

AnalyticNormalSource::AnalyticNormalSource(Tensor4 normal_frames)
    : normals_(std::move(normal_frames)) {}

Tensor4 AnalyticNormalSource::normals(const Tensor4& video) {
    if (!normals_.same_shape(video)) {
        throw Error(ErrorCode::ShapeMismatch, "stored normal frames do not match the video shape");
    }
    return normals_;
}

}  // namespace lightkit::plugins
