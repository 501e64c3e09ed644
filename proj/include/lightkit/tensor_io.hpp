// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>

#include "lightkit/tensor.hpp"

namespace lightkit {

// "LCTK v1" tensor exchange format, little-endian throughout:
//   bytes 0-3  magic "LCTK"
//   u32        version        = 1
//   u32        dtype code     = 1 (f32le)
//   u32        ndim           = 4
//   4 x u64    dims           (frames, channels, height, width)
//   payload    frames*channels*height*width f32le values, row-major
// Round-trips are bit-exact at 32-bit precision.

void save_tensor(const Tensor4& t, std::ostream& out);
void save_tensor(const Tensor4& t, const std::filesystem::path& path);

Tensor4 load_tensor(std::istream& in);
Tensor4 load_tensor(const std::filesystem::path& path);

/// Writes frame f of an F x 3 x H x W tensor as binary PPM (P6, maxval 255),
/// quantizing round-to-nearest with clamp to [0,1].
void write_ppm(const Tensor4& video, int64_t f, const std::filesystem::path& path);
Image read_ppm(const std::filesystem::path& path);

/// Whole clip as frame_0000.ppm ... frame_NNNN.ppm in `dir` (created if absent).
void write_video_ppm(const Tensor4& video, const std::filesystem::path& dir);
/// Loads every frame_*.ppm from `dir` in name order into an F x 3 x H x W tensor.
Tensor4 read_video_ppm(const std::filesystem::path& dir);

}  // namespace lightkit
