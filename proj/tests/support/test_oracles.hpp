// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by tests. These stay
// deliberately naive (direct summation, scalar loops) so they share no code
// with the library paths they check.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lightkit/noise.hpp"
#include "lightkit/tensor.hpp"

namespace oracle {

/// Direct-summation centered 3-D DFT bin: shifted index s of a dim of size N
/// corresponds to signed frequency s - N/2.
inline std::complex<double> dft3_bin(const lightkit::Tensor4& t, int64_t c, int64_t st, int64_t sy,
                                     int64_t sx) {
    const int64_t T = t.frames(), H = t.height(), W = t.width();
    const double kt = static_cast<double>(st - T / 2);
    const double ky = static_cast<double>(sy - H / 2);
    const double kx = static_cast<double>(sx - W / 2);
    std::complex<double> acc{0.0, 0.0};
    for (int64_t nt = 0; nt < T; ++nt) {
        for (int64_t ny = 0; ny < H; ++ny) {
            for (int64_t nx = 0; nx < W; ++nx) {
                const double phase = -2.0 * std::numbers::pi *
                                     (kt * static_cast<double>(nt) / static_cast<double>(T) +
                                      ky * static_cast<double>(ny) / static_cast<double>(H) +
                                      kx * static_cast<double>(nx) / static_cast<double>(W));
                acc += static_cast<double>(t.at(nt, c, ny, nx)) *
                       std::complex<double>(std::cos(phase), std::sin(phase));
            }
        }
    }
    return acc;
}

/// Full centered spectrum by direct summation, laid out like Spectrum4.
inline std::vector<std::complex<double>> dft3_full(const lightkit::Tensor4& t) {
    std::vector<std::complex<double>> bins(static_cast<size_t>(t.size()));
    size_t i = 0;
    for (int64_t f = 0; f < t.frames(); ++f) {
        for (int64_t c = 0; c < t.channels(); ++c) {
            for (int64_t y = 0; y < t.height(); ++y) {
                for (int64_t x = 0; x < t.width(); ++x) {
                    bins[i++] = dft3_bin(t, c, f, y, x);
                }
            }
        }
    }
    return bins;
}

/// Direct-summation inverse of a centered spectrum (1/N), real part.
inline lightkit::Tensor4 idft3_real(const std::vector<std::complex<double>>& bins, int64_t T,
                                    int64_t C, int64_t H, int64_t W) {
    lightkit::Tensor4 out(T, C, H, W);
    const double norm = 1.0 / static_cast<double>(T * H * W);
    for (int64_t nt = 0; nt < T; ++nt) {
        for (int64_t c = 0; c < C; ++c) {
            for (int64_t ny = 0; ny < H; ++ny) {
                for (int64_t nx = 0; nx < W; ++nx) {
                    std::complex<double> acc{0.0, 0.0};
                    for (int64_t st = 0; st < T; ++st) {
                        for (int64_t sy = 0; sy < H; ++sy) {
                            for (int64_t sx = 0; sx < W; ++sx) {
                                const double kt = static_cast<double>(st - T / 2);
                                const double ky = static_cast<double>(sy - H / 2);
                                const double kx = static_cast<double>(sx - W / 2);
                                const double phase =
                                    2.0 * std::numbers::pi *
                                    (kt * static_cast<double>(nt) / static_cast<double>(T) +
                                     ky * static_cast<double>(ny) / static_cast<double>(H) +
                                     kx * static_cast<double>(nx) / static_cast<double>(W));
                                acc += bins[static_cast<size_t>(((st * C + c) * H + sy) * W + sx)] *
                                       std::complex<double>(std::cos(phase), std::sin(phase));
                            }
                        }
                    }
                    out.at(nt, c, ny, nx) = static_cast<float>(acc.real() * norm);
                }
            }
        }
    }
    return out;
}

/// Scalar evaluation of the dynamic low-pass at one centered grid cell,
/// written out from the closed form rather than the library's grid builder.
inline double butterworth_cell(int64_t t, int64_t y, int64_t x, int64_t T, int64_t H, int64_t W,
                               int order, double d_s, double d_t) {
    const double ct = (d_s / d_t) * (2.0 * static_cast<double>(t) / static_cast<double>(T) - 1.0);
    const double ch = 2.0 * static_cast<double>(y) / static_cast<double>(H) - 1.0;
    const double cw = 2.0 * static_cast<double>(x) / static_cast<double>(W) - 1.0;
    const double dist = std::sqrt(ct * ct + ch * ch + cw * cw);
    if (dist > d_s) return 0.0;
    return 1.0 / (1.0 + std::pow((dist * dist) / (d_s * d_s), order));
}

/// Seeded pseudo-random tensor for tests.
inline lightkit::Tensor4 random_tensor(int64_t T, int64_t C, int64_t H, int64_t W, uint64_t seed,
                                       double scale = 1.0) {
    lightkit::Tensor4 t(T, C, H, W);
    for (int64_t f = 0; f < T; ++f) {
        for (int64_t c = 0; c < C; ++c) {
            for (int64_t y = 0; y < H; ++y) {
                for (int64_t x = 0; x < W; ++x) {
                    t.at(f, c, y, x) = static_cast<float>(
                        scale * lightkit::noise::gaussian(seed, 0xBEEF, static_cast<uint64_t>(f),
                                                          static_cast<uint64_t>(c),
                                                          static_cast<uint64_t>(y),
                                                          static_cast<uint64_t>(x)));
                }
            }
        }
    }
    return t;
}

inline lightkit::Tensor4 random_video01(int64_t T, int64_t H, int64_t W, uint64_t seed) {
    lightkit::Tensor4 t = random_tensor(T, 3, H, W, seed, 0.15);
    for (float& v : t.data()) v = std::clamp(v + 0.5f, 0.0f, 1.0f);
    return t;
}

inline double max_abs_diff(const lightkit::Tensor4& a, const lightkit::Tensor4& b) {
    double m = 0.0;
    auto pa = a.data();
    auto pb = b.data();
    for (size_t i = 0; i < pa.size(); ++i) {
        m = std::max(m, std::abs(static_cast<double>(pa[i]) - static_cast<double>(pb[i])));
    }
    return m;
}

inline double rms_diff(const lightkit::Tensor4& a, const lightkit::Tensor4& b) {
    double acc = 0.0;
    auto pa = a.data();
    auto pb = b.data();
    for (size_t i = 0; i < pa.size(); ++i) {
        const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(pa.size()));
}

}  // namespace oracle
