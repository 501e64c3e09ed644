// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace lightkit::metrics {

namespace {

double mse_to_db(double mse) {
    if (mse <= 0.0) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

}  // namespace

double psnr(const Tensor4& a, const Tensor4& b, const Tensor4* region_mask) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::ShapeMismatch, "psnr operands differ in shape");
    }
    if (region_mask != nullptr) {
        if (region_mask->frames() != a.frames() || region_mask->channels() != 1 ||
            region_mask->height() != a.height() || region_mask->width() != a.width()) {
            throw Error(ErrorCode::ShapeMismatch, "psnr mask must be F x 1 x H x W");
        }
    }
    double acc = 0.0;
    int64_t count = 0;
    for (int64_t f = 0; f < a.frames(); ++f) {
        for (int64_t y = 0; y < a.height(); ++y) {
            for (int64_t x = 0; x < a.width(); ++x) {
                if (region_mask != nullptr && region_mask->at(f, 0, y, x) != 1.0f) continue;
                for (int64_t c = 0; c < a.channels(); ++c) {
                    const double d = static_cast<double>(a.at(f, c, y, x)) - b.at(f, c, y, x);
                    acc += d * d;
                    ++count;
                }
            }
        }
    }
    if (count == 0) {
        throw Error(ErrorCode::InvalidArgument, "psnr region mask selects no pixels");
    }
    return mse_to_db(acc / static_cast<double>(count));
}

double psnr_y(const Tensor4& result_video, const Tensor4& pixel_masks, const float luma_weights[3],
              std::vector<double>* per_frame) {
    if (pixel_masks.frames() != result_video.frames() || pixel_masks.channels() != 1 ||
        pixel_masks.height() != result_video.height() ||
        pixel_masks.width() != result_video.width()) {
        throw Error(ErrorCode::ShapeMismatch, "pixel masks must be F x 1 x H x W");
    }
    if (per_frame != nullptr) per_frame->assign(static_cast<size_t>(result_video.frames()), NAN);
    double sum_db = 0.0;
    int64_t frames_counted = 0;
    for (int64_t f = 0; f < result_video.frames(); ++f) {
        const auto luma = luminance_plane(result_video, f, luma_weights);
        double acc = 0.0;
        int64_t count = 0;
        for (int64_t y = 0; y < result_video.height(); ++y) {
            for (int64_t x = 0; x < result_video.width(); ++x) {
                if (pixel_masks.at(f, 0, y, x) != 1.0f) continue;
                const double d = 1.0 - luma[static_cast<size_t>(y * result_video.width() + x)];
                acc += d * d;
                ++count;
            }
        }
        if (count == 0) continue;
        const double db = mse_to_db(acc / static_cast<double>(count));
        if (per_frame != nullptr) (*per_frame)[static_cast<size_t>(f)] = db;
        sum_db += db;
        ++frames_counted;
    }
    if (frames_counted == 0) {
        throw Error(ErrorCode::InvalidArgument, "every frame's light mask is empty");
    }
    return sum_db / static_cast<double>(frames_counted);
}

Tensor4 overlay_light(const Tensor4& source_video, const Tensor4& light_maps, double gain,
                      OverlayMode mode) {
    if (light_maps.frames() != source_video.frames() || light_maps.channels() != 1 ||
        light_maps.height() != source_video.height() ||
        light_maps.width() != source_video.width()) {
        throw Error(ErrorCode::ShapeMismatch, "light maps must be F x 1 x H x W");
    }
    Tensor4 out = source_video;
    for (int64_t f = 0; f < out.frames(); ++f) {
        for (int64_t y = 0; y < out.height(); ++y) {
            for (int64_t x = 0; x < out.width(); ++x) {
                const double light = gain * light_maps.at(f, 0, y, x);
                for (int64_t c = 0; c < out.channels(); ++c) {
                    const double src = source_video.at(f, c, y, x);
                    double v;
                    if (mode == OverlayMode::Additive) {
                        v = std::clamp(src + light, 0.0, 1.0);
                    } else {
                        const double a = std::clamp(light, 0.0, 1.0);
                        v = (1.0 - a) * src + a;
                    }
                    out.at(f, c, y, x) = static_cast<float>(v);
                }
            }
        }
    }
    return out;
}

double psnr_light(const Tensor4& result_video, const Tensor4& source_video,
                  const Tensor4& light_maps, double gain, OverlayMode mode) {
    return psnr(result_video, overlay_light(source_video, light_maps, gain, mode));
}

double temporal_consistency(const Tensor4& video, std::vector<double>* per_pair) {
    if (video.frames() < 2) {
        throw Error(ErrorCode::InvalidArgument, "temporal consistency needs at least 2 frames");
    }
    if (per_pair != nullptr) per_pair->clear();
    double sum = 0.0;
    for (int64_t f = 0; f + 1 < video.frames(); ++f) {
        const double db = psnr(video.frame(f), video.frame(f + 1));
        if (per_pair != nullptr) per_pair->push_back(db);
        sum += db;
    }
    return sum / static_cast<double>(video.frames() - 1);
}

double centroid_track_error(const Tensor4& result_video, const traj::TrajectorySpec& trajectory,
                            std::vector<double>* per_frame) {
    if (trajectory.frame_count != result_video.frames()) {
        throw Error(ErrorCode::ShapeMismatch, "trajectory frame count does not match the video");
    }
    const auto states = traj::interpolate(trajectory);
    const int64_t H = result_video.height();
    const int64_t W = result_video.width();
    if (per_frame != nullptr) per_frame->assign(static_cast<size_t>(result_video.frames()), NAN);

    double sum = 0.0;
    int64_t counted = 0;
    for (int64_t f = 0; f < result_video.frames(); ++f) {
        auto luma = luminance_plane(result_video, f);
        std::vector<float> sorted = luma;
        std::sort(sorted.begin(), sorted.end());
        const size_t p90 = static_cast<size_t>(0.9 * static_cast<double>(sorted.size() - 1));
        const float threshold = sorted[p90];

        double wsum = 0.0, xsum = 0.0, ysum = 0.0;
        for (int64_t y = 0; y < H; ++y) {
            for (int64_t x = 0; x < W; ++x) {
                const float v = luma[static_cast<size_t>(y * W + x)];
                if (v < threshold) continue;
                wsum += v;
                xsum += v * static_cast<double>(x);
                ysum += v * static_cast<double>(y);
            }
        }
        if (wsum <= 1e-9) continue;  // near-black frame: centroid undefined
        const auto& s = states[static_cast<size_t>(f)][0];
        const double dx = xsum / wsum - traj::pixel_of_norm(s.center.x, W);
        const double dy = ysum / wsum - traj::pixel_of_norm(s.center.y, H);
        const double err = std::hypot(dx, dy) / static_cast<double>(W);
        if (per_frame != nullptr) (*per_frame)[static_cast<size_t>(f)] = err;
        sum += err;
        ++counted;
    }
    if (counted == 0) {
        throw Error(ErrorCode::InvalidArgument, "centroid undefined for every frame (all black)");
    }
    return sum / static_cast<double>(counted);
}

std::string MetricReport::to_json() const {
    nlohmann::json j;
    j["psnr_y"] = psnr_y;
    j["psnr_light"] = psnr_light;
    j["temporal_consistency"] = temporal_consistency;
    j["centroid_track_error"] = centroid_track_error;
    auto dump_vec = [](const std::vector<double>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (double d : v) {
            if (std::isnan(d)) {
                arr.push_back(nullptr);
            } else {
                arr.push_back(d);
            }
        }
        return arr;
    };
    j["per_frame"]["psnr_y"] = dump_vec(psnr_y_per_frame);
    j["per_frame"]["temporal"] = dump_vec(temporal_per_pair);
    j["per_frame"]["centroid_error"] = dump_vec(centroid_error_per_frame);
    return j.dump(2);
}

MetricReport evaluate(const Tensor4& result_video, const Tensor4& source_video,
                      const traj::TrajectorySpec& trajectory, double mask_threshold,
                      double overlay_gain, const float luma_weights[3]) {
    const auto maps = traj::generate(trajectory, result_video.height(), result_video.width(),
                                     mask_threshold, /*latent_scale=*/1);
    MetricReport report;
    report.psnr_y = psnr_y(result_video, maps.masks_pixel, luma_weights, &report.psnr_y_per_frame);
    report.psnr_light = psnr_light(result_video, source_video, maps.maps, overlay_gain);
    report.temporal_consistency = temporal_consistency(result_video, &report.temporal_per_pair);
    report.centroid_track_error =
        centroid_track_error(result_video, trajectory, &report.centroid_error_per_frame);
    return report;
}

}  // namespace lightkit::metrics
