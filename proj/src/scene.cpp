// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "lightkit/tensor_io.hpp"

namespace lightkit::scene {

namespace {

constexpr double kBakeCenterX = 0.16;
constexpr double kBakeCenterY = 0.50;
constexpr double kBakeRadius = 0.34;

// Dark-ish palette: the relighting tests rely on the unlit scene sitting well
// below mid-gray.
constexpr float kCheckerA[3] = {0.16f, 0.17f, 0.20f};
constexpr float kCheckerB[3] = {0.26f, 0.25f, 0.23f};
constexpr float kSphereAlbedo[3] = {0.46f, 0.34f, 0.28f};
constexpr int kCheckerCell = 8;

void normalize3(double v[3]) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n > 0.0) {
        v[0] /= n;
        v[1] /= n;
        v[2] /= n;
    } else {
        v[0] = 0.0;
        v[1] = 0.0;
        v[2] = 1.0;
    }
}

}  // namespace

void light_direction(double x, double y, double out[3]) {
    out[0] = 2.0 * x - 1.0;
    out[1] = 2.0 * y - 1.0;
    out[2] = 1.0;
    normalize3(out);
}

SceneData make_sphere_scene(const SceneParams& p) {
    if (p.frames < 1 || p.height < 2 || p.width < 2) {
        throw Error(ErrorCode::InvalidArgument, "scene needs frames >= 1 and size >= 2x2");
    }
    SceneData data;
    data.video = Tensor4(p.frames, 3, p.height, p.width);
    data.normals = Tensor4(p.frames, 3, p.height, p.width);
    data.albedo = Tensor4(p.frames, 3, p.height, p.width);

    double bake_dir[3] = {0.0, 0.0, 1.0};
    if (p.bake == BakeMode::Left) {
        light_direction(kBakeCenterX, kBakeCenterY, bake_dir);
    }

    for (int64_t f = 0; f < p.frames; ++f) {
        const double u = p.frames > 1 ? static_cast<double>(f) / static_cast<double>(p.frames - 1)
                                      : 0.0;
        const double cx = p.sphere_center_x + p.drift * u;
        const double cy = p.sphere_center_y;
        for (int64_t yi = 0; yi < p.height; ++yi) {
            const double py = static_cast<double>(yi) / static_cast<double>(p.height - 1);
            for (int64_t xi = 0; xi < p.width; ++xi) {
                const double px = static_cast<double>(xi) / static_cast<double>(p.width - 1);

                double n[3] = {0.0, 0.0, 1.0};
                const float* albedo = (((xi / kCheckerCell) + (yi / kCheckerCell)) % 2 == 0)
                                          ? kCheckerA
                                          : kCheckerB;
                const double dx = (px - cx) / p.sphere_radius;
                const double dy = (py - cy) / p.sphere_radius;
                const double d2 = dx * dx + dy * dy;
                if (d2 <= 1.0) {
                    n[0] = dx;
                    n[1] = dy;
                    n[2] = std::sqrt(1.0 - d2);
                    albedo = kSphereAlbedo;
                }

                double shade = p.ambient +
                               (1.0 - p.ambient) *
                                   std::max(0.0, n[0] * bake_dir[0] + n[1] * bake_dir[1] +
                                                     n[2] * bake_dir[2]);
                if (p.bake == BakeMode::Left) {
                    const double bx = (px - kBakeCenterX) / kBakeRadius;
                    const double by = (py - kBakeCenterY) / kBakeRadius;
                    const double fall = std::clamp(1.0 - std::sqrt(bx * bx + by * by), 0.0, 1.0);
                    shade *= 1.0 + p.bake_gain * fall;
                }

                for (int c = 0; c < 3; ++c) {
                    data.albedo.at(f, c, yi, xi) = albedo[c];
                    data.normals.at(f, c, yi, xi) = static_cast<float>((n[c] + 1.0) * 0.5);
                    data.video.at(f, c, yi, xi) =
                        static_cast<float>(std::clamp(albedo[c] * shade, 0.0, 1.0));
                }
            }
        }
    }
    return data;
}

void write_scene(const SceneData& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_video_ppm(data.video, dir);
    write_video_ppm(data.normals, dir / "normals");
    write_video_ppm(data.albedo, dir / "albedo");

    nlohmann::json meta;
    meta["frames"] = data.video.frames();
    meta["height"] = data.video.height();
    meta["width"] = data.video.width();
    meta["layout"] = {{"video", "frame_*.ppm"},
                      {"normals", "normals/frame_*.ppm"},
                      {"albedo", "albedo/frame_*.ppm"}};
    std::ofstream out(dir / "scene.json");
    out << meta.dump(2) << "\n";
}

}  // namespace lightkit::scene
