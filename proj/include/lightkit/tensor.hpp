// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lightkit/error.hpp"

namespace lightkit {

/// Dense 4-D tensor of 32-bit floats, row-major in (frame, channel, row, col)
/// order. Values are immutable in spirit: operations return new tensors and
/// never mutate their inputs, so sharing across threads is safe.
class Tensor4 {
public:
    Tensor4() = default;
    Tensor4(int64_t frames, int64_t channels, int64_t height, int64_t width);
    Tensor4(int64_t frames, int64_t channels, int64_t height, int64_t width, float fill);
    Tensor4(int64_t frames, int64_t channels, int64_t height, int64_t width, std::vector<float> data);

    int64_t frames() const noexcept { return frames_; }
    int64_t channels() const noexcept { return channels_; }
    int64_t height() const noexcept { return height_; }
    int64_t width() const noexcept { return width_; }
    int64_t size() const noexcept { return static_cast<int64_t>(data_.size()); }
    bool empty() const noexcept { return data_.empty(); }

    bool same_shape(const Tensor4& other) const noexcept {
        return frames_ == other.frames_ && channels_ == other.channels_ &&
               height_ == other.height_ && width_ == other.width_;
    }

    int64_t index(int64_t f, int64_t c, int64_t y, int64_t x) const noexcept {
        return ((f * channels_ + c) * height_ + y) * width_ + x;
    }

    float at(int64_t f, int64_t c, int64_t y, int64_t x) const { return data_[index(f, c, y, x)]; }
    float& at(int64_t f, int64_t c, int64_t y, int64_t x) { return data_[index(f, c, y, x)]; }

    std::span<const float> data() const noexcept { return data_; }
    std::span<float> data() noexcept { return data_; }

    /// Copy of one frame as a 1 x C x H x W tensor.
    Tensor4 frame(int64_t f) const;
    /// Writes `src` (1 x C x H x W) into frame slot f.
    void set_frame(int64_t f, const Tensor4& src);

    /// Throws NumericFailure if any element is NaN or infinite.
    void check_finite(const char* context) const;

    bool operator==(const Tensor4& other) const = default;

private:
    int64_t frames_ = 0, channels_ = 0, height_ = 0, width_ = 0;
    std::vector<float> data_;
};

/// Single RGB frame, values nominally in [0,1]; clamped only on 8-bit write-out.
struct Image {
    int64_t height = 0;
    int64_t width = 0;
    std::vector<float> pixels;  // interleaved RGB, row-major

    Image() = default;
    Image(int64_t h, int64_t w) : height(h), width(w), pixels(static_cast<size_t>(h * w * 3), 0.0f) {}

    float& at(int64_t y, int64_t x, int c) { return pixels[(y * width + x) * 3 + c]; }
    float at(int64_t y, int64_t x, int c) const { return pixels[(y * width + x) * 3 + c]; }
};

// BT.601 luma weights. The default everywhere; BT.709 is available where a
// caller wants it (metrics CLI flag).
inline constexpr float kLumaBt601[3] = {0.299f, 0.587f, 0.114f};
inline constexpr float kLumaBt709[3] = {0.2126f, 0.7152f, 0.0722f};

/// Per-pixel luminance plane of an RGB image, same row-major layout.
std::vector<float> to_luminance(const Image& img, const float weights[3] = kLumaBt601);

/// Luminance plane of frame f of an F x 3 x H x W tensor.
std::vector<float> luminance_plane(const Tensor4& video, int64_t f, const float weights[3] = kLumaBt601);

/// Elementwise (1-w)*a + w*b. Exact at w=0 and w=1.
Tensor4 lerp(const Tensor4& a, const Tensor4& b, double w);

/// Block-averages each (frame, channel) plane by an integer factor.
/// Height and width must be divisible by `scale`.
Tensor4 resample_area(const Tensor4& t, int scale);

/// Nearest-neighbour upsample by an integer factor (inverse layout of resample_area).
Tensor4 upsample_nearest(const Tensor4& t, int scale);

/// Elementwise clamp to [0,1].
Tensor4 clamp01(const Tensor4& t);

/// Frame f of an F x 3 x H x W tensor as an Image (no clamping).
Image frame_to_image(const Tensor4& video, int64_t f);

}  // namespace lightkit
