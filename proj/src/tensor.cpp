// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lightkit {

namespace {

void validate_dims(int64_t frames, int64_t channels, int64_t height, int64_t width) {
    if (frames < 1 || channels < 1 || height < 1 || width < 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "tensor dims must all be >= 1, got " + std::to_string(frames) + "x" +
                        std::to_string(channels) + "x" + std::to_string(height) + "x" +
                        std::to_string(width));
    }
}

}  // namespace

Tensor4::Tensor4(int64_t frames, int64_t channels, int64_t height, int64_t width)
    : Tensor4(frames, channels, height, width, 0.0f) {}

Tensor4::Tensor4(int64_t frames, int64_t channels, int64_t height, int64_t width, float fill)
    : frames_(frames), channels_(channels), height_(height), width_(width) {
    validate_dims(frames, channels, height, width);
    data_.assign(static_cast<size_t>(frames * channels * height * width), fill);
}

Tensor4::Tensor4(int64_t frames, int64_t channels, int64_t height, int64_t width,
                 std::vector<float> data)
    : frames_(frames), channels_(channels), height_(height), width_(width), data_(std::move(data)) {
    validate_dims(frames, channels, height, width);
    const auto expected = static_cast<size_t>(frames * channels * height * width);
    if (data_.size() != expected) {
        throw Error(ErrorCode::InvalidArgument,
                    "data length " + std::to_string(data_.size()) + " does not match dims product " +
                        std::to_string(expected));
    }
}

Tensor4 Tensor4::frame(int64_t f) const {
    Tensor4 out(1, channels_, height_, width_);
    const int64_t plane = channels_ * height_ * width_;
    std::copy_n(data_.begin() + f * plane, plane, out.data_.begin());
    return out;
}

void Tensor4::set_frame(int64_t f, const Tensor4& src) {
    if (src.frames_ != 1 || src.channels_ != channels_ || src.height_ != height_ ||
        src.width_ != width_) {
        throw Error(ErrorCode::ShapeMismatch, "set_frame source shape does not match");
    }
    const int64_t plane = channels_ * height_ * width_;
    std::copy_n(src.data_.begin(), plane, data_.begin() + f * plane);
}

void Tensor4::check_finite(const char* context) const {
    for (float v : data_) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NumericFailure,
                        std::string("non-finite element detected in ") + context);
        }
    }
}

std::vector<float> to_luminance(const Image& img, const float weights[3]) {
    std::vector<float> luma(static_cast<size_t>(img.height * img.width));
    for (int64_t i = 0; i < img.height * img.width; ++i) {
        luma[static_cast<size_t>(i)] = weights[0] * img.pixels[i * 3 + 0] +
                                       weights[1] * img.pixels[i * 3 + 1] +
                                       weights[2] * img.pixels[i * 3 + 2];
    }
    return luma;
}

std::vector<float> luminance_plane(const Tensor4& video, int64_t f, const float weights[3]) {
    if (video.channels() != 3) {
        throw Error(ErrorCode::ShapeMismatch, "luminance_plane expects a 3-channel tensor");
    }
    const int64_t hw = video.height() * video.width();
    std::vector<float> luma(static_cast<size_t>(hw));
    const float* r = video.data().data() + video.index(f, 0, 0, 0);
    const float* g = video.data().data() + video.index(f, 1, 0, 0);
    const float* b = video.data().data() + video.index(f, 2, 0, 0);
    for (int64_t i = 0; i < hw; ++i) {
        luma[static_cast<size_t>(i)] = weights[0] * r[i] + weights[1] * g[i] + weights[2] * b[i];
    }
    return luma;
}

Tensor4 lerp(const Tensor4& a, const Tensor4& b, double w) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::ShapeMismatch, "lerp operands differ in shape");
    }
    if (w == 0.0) return a;
    if (w == 1.0) return b;
    Tensor4 out(a.frames(), a.channels(), a.height(), a.width());
    auto dst = out.data();
    auto pa = a.data();
    auto pb = b.data();
    for (size_t i = 0; i < dst.size(); ++i) {
        dst[i] = static_cast<float>((1.0 - w) * pa[i] + w * pb[i]);
    }
    return out;
}

Tensor4 resample_area(const Tensor4& t, int scale) {
    if (scale < 1) {
        throw Error(ErrorCode::InvalidArgument, "resample scale must be >= 1");
    }
    if (scale == 1) return t;
    if (t.height() % scale != 0 || t.width() % scale != 0) {
        throw Error(ErrorCode::InvalidArgument,
                    "tensor height/width not divisible by scale " + std::to_string(scale));
    }
    const int64_t oh = t.height() / scale;
    const int64_t ow = t.width() / scale;
    Tensor4 out(t.frames(), t.channels(), oh, ow);
    const double inv = 1.0 / (static_cast<double>(scale) * scale);
    for (int64_t f = 0; f < t.frames(); ++f) {
        for (int64_t c = 0; c < t.channels(); ++c) {
            for (int64_t y = 0; y < oh; ++y) {
                for (int64_t x = 0; x < ow; ++x) {
                    double acc = 0.0;
                    for (int dy = 0; dy < scale; ++dy) {
                        for (int dx = 0; dx < scale; ++dx) {
                            acc += t.at(f, c, y * scale + dy, x * scale + dx);
                        }
                    }
                    out.at(f, c, y, x) = static_cast<float>(acc * inv);
                }
            }
        }
    }
    return out;
}

Tensor4 upsample_nearest(const Tensor4& t, int scale) {
    if (scale < 1) {
        throw Error(ErrorCode::InvalidArgument, "upsample scale must be >= 1");
    }
    if (scale == 1) return t;
    Tensor4 out(t.frames(), t.channels(), t.height() * scale, t.width() * scale);
    for (int64_t f = 0; f < t.frames(); ++f) {
        for (int64_t c = 0; c < t.channels(); ++c) {
            for (int64_t y = 0; y < out.height(); ++y) {
                for (int64_t x = 0; x < out.width(); ++x) {
                    out.at(f, c, y, x) = t.at(f, c, y / scale, x / scale);
                }
            }
        }
    }
    return out;
}

Tensor4 clamp01(const Tensor4& t) {
    Tensor4 out = t;
    for (float& v : out.data()) {
        v = std::clamp(v, 0.0f, 1.0f);
    }
    return out;
}

Image frame_to_image(const Tensor4& video, int64_t f) {
    if (video.channels() != 3) {
        throw Error(ErrorCode::ShapeMismatch, "frame_to_image expects a 3-channel tensor");
    }
    Image img(video.height(), video.width());
    for (int64_t y = 0; y < video.height(); ++y) {
        for (int64_t x = 0; x < video.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                img.at(y, x, c) = video.at(f, c, y, x);
            }
        }
    }
    return img;
}

}  // namespace lightkit
