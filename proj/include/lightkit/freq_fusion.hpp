// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "lightkit/tensor.hpp"

namespace lightkit::freq {

/// Order and cut-off parameters of the dynamic 3-D Butterworth low-pass.
struct ButterworthSpec {
    int order = 4;
    double d_s = 0.5;  // spatial cut-off, in (0,1]
    double d_t = 0.5;  // temporal cut-off, in (0,1]
};

void validate(const ButterworthSpec& spec);

/// Centered complex spectrum of a Tensor4: per channel, a 3-D DFT over
/// (frame, row, col) with the zero-frequency bin shifted to index dim/2 of
/// each transformed axis. Layout matches the source tensor (f, c, y, x).
struct Spectrum4 {
    int64_t frames = 0, channels = 0, height = 0, width = 0;
    std::vector<std::complex<double>> bins;

    int64_t index(int64_t f, int64_t c, int64_t y, int64_t x) const noexcept {
        return ((f * channels + c) * height + y) * width + x;
    }
    std::complex<double> at(int64_t f, int64_t c, int64_t y, int64_t x) const {
        return bins[static_cast<size_t>(index(f, c, y, x))];
    }
};

/// Unnormalized forward 3-D DFT per channel, centered.
Spectrum4 fft3(const Tensor4& t);

struct Ifft3Result {
    Tensor4 tensor;
    double max_imag = 0.0;  // largest |imaginary residue| discarded on output
};

/// Inverse of fft3 (1/N normalization); returns the real part.
Ifft3Result ifft3(const Spectrum4& s);

/// Real-valued filter over the centered (frame, row, col) grid.
/// Index i of a dim of size N maps to coordinate 2 i / N - 1, so
///   D(t,h,w) = sqrt( ((d_s/d_t) ct)^2 + ch^2 + cw^2 )
///   H        = 1 / (1 + (D^2 / d_s^2)^order)  where D <= d_s, else 0.
struct FilterGrid {
    int64_t frames = 0, height = 0, width = 0;
    std::vector<double> values;

    double at(int64_t t, int64_t y, int64_t x) const {
        return values[static_cast<size_t>((t * height + y) * width + x)];
    }
};

FilterGrid butterworth(int64_t frames, int64_t height, int64_t width, const ButterworthSpec& spec);

/// Memoized variant; the returned grid is immutable and safe to share across threads.
std::shared_ptr<const FilterGrid> butterworth_cached(int64_t frames, int64_t height, int64_t width,
                                                     const ButterworthSpec& spec);

struct FuseResult {
    Tensor4 tensor;
    double max_imag = 0.0;
};

/// Takes low frequencies from `low_source` and high frequencies from
/// `high_source`: IFFT( FFT(low) . H + FFT(high) . (1 - H) ), real part.
FuseResult fuse(const Tensor4& low_source, const Tensor4& high_source, const ButterworthSpec& spec);

/// Cut-off schedule: alpha = 1 - step/total, floored at alpha_min so the final
/// steps stay low-pass instead of losing the filter support entirely.
double dynamic_cutoff(int step, int total_steps, double alpha_min = 0.05);

}  // namespace lightkit::freq
