// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/freq_fusion.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace lightkit::freq {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    fftw_complex* ptr = nullptr;
    explicit FftwBuffer(size_t n) : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct FftwPlan {
    fftw_plan plan = nullptr;
    FftwPlan(int t, int h, int w, fftw_complex* buf, int sign) {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft_3d(t, h, w, buf, buf, sign, FFTW_ESTIMATE);
    }
    ~FftwPlan() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
};

// fftshift: DC (unshifted index 0) lands at index dim/2.
inline int64_t shifted_from_raw(int64_t raw, int64_t n) { return (raw + n / 2) % n; }
inline int64_t raw_from_shifted(int64_t shifted, int64_t n) { return (shifted + n - n / 2) % n; }

}  // namespace

void validate(const ButterworthSpec& spec) {
    if (spec.order < 1) {
        throw Error(ErrorCode::InvalidArgument, "butterworth order must be >= 1");
    }
    if (!(spec.d_s > 0.0 && spec.d_s <= 1.0) || !(spec.d_t > 0.0 && spec.d_t <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "butterworth cut-offs must lie in (0,1]");
    }
}

Spectrum4 fft3(const Tensor4& t) {
    const int64_t T = t.frames(), C = t.channels(), H = t.height(), W = t.width();
    const size_t volume = static_cast<size_t>(T * H * W);
    Spectrum4 out;
    out.frames = T;
    out.channels = C;
    out.height = H;
    out.width = W;
    out.bins.resize(static_cast<size_t>(T * C * H * W));

    FftwBuffer buf(volume);
    FftwPlan plan(static_cast<int>(T), static_cast<int>(H), static_cast<int>(W), buf.ptr,
                  FFTW_FORWARD);
    for (int64_t c = 0; c < C; ++c) {
        for (int64_t f = 0; f < T; ++f) {
            for (int64_t y = 0; y < H; ++y) {
                for (int64_t x = 0; x < W; ++x) {
                    const size_t i = static_cast<size_t>((f * H + y) * W + x);
                    buf.ptr[i][0] = t.at(f, c, y, x);
                    buf.ptr[i][1] = 0.0;
                }
            }
        }
        fftw_execute(plan.plan);
        for (int64_t f = 0; f < T; ++f) {
            const int64_t sf = shifted_from_raw(f, T);
            for (int64_t y = 0; y < H; ++y) {
                const int64_t sy = shifted_from_raw(y, H);
                for (int64_t x = 0; x < W; ++x) {
                    const int64_t sx = shifted_from_raw(x, W);
                    const size_t i = static_cast<size_t>((f * H + y) * W + x);
                    out.bins[static_cast<size_t>(out.index(sf, c, sy, sx))] = {buf.ptr[i][0],
                                                                               buf.ptr[i][1]};
                }
            }
        }
    }
    return out;
}

Ifft3Result ifft3(const Spectrum4& s) {
    const int64_t T = s.frames, C = s.channels, H = s.height, W = s.width;
    const size_t volume = static_cast<size_t>(T * H * W);
    const double norm = 1.0 / static_cast<double>(volume);

    Ifft3Result result;
    result.tensor = Tensor4(T, C, H, W);

    FftwBuffer buf(volume);
    FftwPlan plan(static_cast<int>(T), static_cast<int>(H), static_cast<int>(W), buf.ptr,
                  FFTW_BACKWARD);
    for (int64_t c = 0; c < C; ++c) {
        for (int64_t f = 0; f < T; ++f) {
            const int64_t sf = shifted_from_raw(f, T);
            for (int64_t y = 0; y < H; ++y) {
                const int64_t sy = shifted_from_raw(y, H);
                for (int64_t x = 0; x < W; ++x) {
                    const int64_t sx = shifted_from_raw(x, W);
                    const auto v = s.at(sf, c, sy, sx);
                    const size_t i = static_cast<size_t>((f * H + y) * W + x);
                    buf.ptr[i][0] = v.real();
                    buf.ptr[i][1] = v.imag();
                }
            }
        }
        fftw_execute(plan.plan);
        for (int64_t f = 0; f < T; ++f) {
            for (int64_t y = 0; y < H; ++y) {
                for (int64_t x = 0; x < W; ++x) {
                    const size_t i = static_cast<size_t>((f * H + y) * W + x);
                    result.tensor.at(f, c, y, x) = static_cast<float>(buf.ptr[i][0] * norm);
                    result.max_imag = std::max(result.max_imag, std::abs(buf.ptr[i][1] * norm));
                }
            }
        }
    }
    return result;
}

FilterGrid butterworth(int64_t frames, int64_t height, int64_t width, const ButterworthSpec& spec) {
    validate(spec);
    if (frames < 1 || height < 1 || width < 1) {
        throw Error(ErrorCode::InvalidArgument, "filter dims must be >= 1");
    }
    FilterGrid grid;
    grid.frames = frames;
    grid.height = height;
    grid.width = width;
    grid.values.resize(static_cast<size_t>(frames * height * width));
    const double ratio = spec.d_s / spec.d_t;
    const double ds2 = spec.d_s * spec.d_s;
    size_t i = 0;
    for (int64_t t = 0; t < frames; ++t) {
        const double ct = ratio * (2.0 * static_cast<double>(t) / static_cast<double>(frames) - 1.0);
        for (int64_t y = 0; y < height; ++y) {
            const double ch = 2.0 * static_cast<double>(y) / static_cast<double>(height) - 1.0;
            for (int64_t x = 0; x < width; ++x) {
                const double cw = 2.0 * static_cast<double>(x) / static_cast<double>(width) - 1.0;
                const double d2 = ct * ct + ch * ch + cw * cw;
                double value = 0.0;
                if (d2 <= ds2) {
                    value = 1.0 / (1.0 + std::pow(d2 / ds2, spec.order));
                }
                grid.values[i++] = value;
            }
        }
    }
    return grid;
}

std::shared_ptr<const FilterGrid> butterworth_cached(int64_t frames, int64_t height, int64_t width,
                                                     const ButterworthSpec& spec) {
    using Key = std::tuple<int64_t, int64_t, int64_t, int, double, double>;
    static std::mutex cache_mutex;
    static std::map<Key, std::shared_ptr<const FilterGrid>> cache;

    const Key key{frames, height, width, spec.order, spec.d_s, spec.d_t};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto grid = std::make_shared<const FilterGrid>(butterworth(frames, height, width, spec));
    std::lock_guard<std::mutex> lock(cache_mutex);
    return cache.try_emplace(key, std::move(grid)).first->second;
}

FuseResult fuse(const Tensor4& low_source, const Tensor4& high_source, const ButterworthSpec& spec) {
    if (!low_source.same_shape(high_source)) {
        throw Error(ErrorCode::ShapeMismatch, "fuse operands differ in shape");
    }
    const auto filter =
        butterworth_cached(low_source.frames(), low_source.height(), low_source.width(), spec);
    Spectrum4 low = fft3(low_source);
    const Spectrum4 high = fft3(high_source);
    for (int64_t f = 0; f < low.frames; ++f) {
        for (int64_t y = 0; y < low.height; ++y) {
            for (int64_t x = 0; x < low.width; ++x) {
                const double h = filter->at(f, y, x);
                for (int64_t c = 0; c < low.channels; ++c) {
                    const auto i = static_cast<size_t>(low.index(f, c, y, x));
                    low.bins[i] = low.bins[i] * h + high.bins[i] * (1.0 - h);
                }
            }
        }
    }
    auto inverse = ifft3(low);
    return {std::move(inverse.tensor), inverse.max_imag};
}

double dynamic_cutoff(int step, int total_steps, double alpha_min) {
    if (total_steps < 1 || step < 0 || step > total_steps) {
        throw Error(ErrorCode::InvalidArgument, "cutoff step outside 0..total_steps");
    }
    const double alpha = 1.0 - static_cast<double>(step) / static_cast<double>(total_steps);
    return std::max(alpha, alpha_min);
}

}  // namespace lightkit::freq
