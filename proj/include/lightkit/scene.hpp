// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "lightkit/tensor.hpp"

namespace lightkit::scene {

enum class BakeMode {
    None,  // flat overhead illumination
    Left,  // strong static light baked into the left side of every frame
};

/// Sphere over a checkerboard ground plane, rendered top-down with exact
/// normals. The baked lighting option reproduces the stale-source-light
/// scenario used by the geometry-fusion tests.
struct SceneData {
    Tensor4 video;    // F x 3 x H x W, the lit source frames
    Tensor4 normals;  // F x 3 x H x W, (n + 1) / 2 encoding
    Tensor4 albedo;   // F x 3 x H x W
};

struct SceneParams {
    int64_t frames = 16;
    int64_t height = 64;
    int64_t width = 64;
    BakeMode bake = BakeMode::None;
    double sphere_center_x = 0.45;
    double sphere_center_y = 0.42;
    double sphere_radius = 0.27;   // fraction of the frame
    double drift = 0.0;            // horizontal sphere drift over the clip
    double ambient = 0.45;
    double bake_gain = 1.1;        // extra gain of the baked light disc
};

/// Unit light direction for a light hovering above normalized image position
/// (x, y): normalize(2x - 1, 2y - 1, 1). Shared by the scene renderer and the
/// reference relighter so baked and commanded lighting agree geometrically.
void light_direction(double x, double y, double out[3]);

SceneData make_sphere_scene(const SceneParams& params);

/// Writes frame_*.ppm plus normals/ and albedo/ subdirectories and scene.json.
void write_scene(const SceneData& data, const std::filesystem::path& dir);

}  // namespace lightkit::scene
