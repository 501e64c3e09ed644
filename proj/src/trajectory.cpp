// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lightkit::traj {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::BadConfig, what);
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void validate_point(const Vec2& p, const std::string& what) {
    require(in_unit(p.x) && in_unit(p.y), what + " must lie in [0,1]^2");
}

Vec2 lerp_point(const Vec2& a, const Vec2& b, double u) {
    return {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
}

Vec2 polyline_at(const PolylinePattern& poly, double u) {
    std::vector<double> cumulative{0.0};
    cumulative.reserve(poly.waypoints.size());
    for (size_t i = 1; i < poly.waypoints.size(); ++i) {
        const double dx = poly.waypoints[i].x - poly.waypoints[i - 1].x;
        const double dy = poly.waypoints[i].y - poly.waypoints[i - 1].y;
        cumulative.push_back(cumulative.back() + std::hypot(dx, dy));
    }
    const double total = cumulative.back();
    if (total <= 0.0) return poly.waypoints.front();
    const double target = u * total;
    size_t seg = 1;
    while (seg + 1 < cumulative.size() && cumulative[seg] < target) ++seg;
    const double seg_len = cumulative[seg] - cumulative[seg - 1];
    const double t = seg_len > 0.0 ? (target - cumulative[seg - 1]) / seg_len : 0.0;
    return lerp_point(poly.waypoints[seg - 1], poly.waypoints[seg], std::clamp(t, 0.0, 1.0));
}

Vec2 position_at(const Pattern& pattern, double u) {
    return std::visit(
        [&](const auto& p) -> Vec2 {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LinearPattern>) {
                return lerp_point(p.start, p.end, u);
            } else if constexpr (std::is_same_v<P, CircularPattern>) {
                const double angle = p.start_angle + u * (p.end_angle - p.start_angle);
                return {p.center.x + p.orbit_radius * std::cos(angle),
                        p.center.y + p.orbit_radius * std::sin(angle)};
            } else {
                return polyline_at(p, u);
            }
        },
        pattern);
}

Vec2 parse_point(const json& j, const std::string& what) {
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
            what + " must be a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void validate(const TrajectorySpec& spec) {
    require(spec.frame_count >= 1, "frame_count must be >= 1");
    require(!spec.sources.empty(), "trajectory needs at least one source");
    for (const auto& src : spec.sources) {
        require(src.radius_start > 0.0 && src.radius_start <= 1.0 && src.radius_end > 0.0 &&
                    src.radius_end <= 1.0,
                "source radii must lie in (0,1]");
        require(src.intensity >= 0.0 && src.intensity <= 1.0, "intensity must lie in [0,1]");
        std::visit(
            [&](const auto& p) {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, LinearPattern>) {
                    validate_point(p.start, "linear start");
                    validate_point(p.end, "linear end");
                } else if constexpr (std::is_same_v<P, CircularPattern>) {
                    validate_point(p.center, "circular center");
                    require(p.orbit_radius >= 0.0, "orbit_radius must be >= 0");
                } else {
                    require(p.waypoints.size() >= 2, "polyline needs at least 2 waypoints");
                    for (const auto& w : p.waypoints) validate_point(w, "polyline waypoint");
                }
            },
            src.pattern);
    }
}

std::vector<std::vector<SourceState>> interpolate(const TrajectorySpec& spec) {
    validate(spec);
    std::vector<std::vector<SourceState>> frames(static_cast<size_t>(spec.frame_count));
    for (int64_t k = 0; k < spec.frame_count; ++k) {
        const double u =
            spec.frame_count > 1 ? static_cast<double>(k) / static_cast<double>(spec.frame_count - 1)
                                 : 0.0;
        auto& states = frames[static_cast<size_t>(k)];
        states.reserve(spec.sources.size());
        for (const auto& src : spec.sources) {
            states.push_back({position_at(src.pattern, u),
                              src.radius_start + u * (src.radius_end - src.radius_start),
                              src.intensity});
        }
    }
    return frames;
}

Tensor4 rasterize(const std::vector<SourceState>& states, int64_t height, int64_t width,
                  Falloff falloff) {
    if (height < 1 || width < 1) {
        throw Error(ErrorCode::InvalidArgument, "rasterize needs H, W >= 1");
    }
    Tensor4 map(1, 1, height, width);
    const double min_dim = static_cast<double>(std::min(height, width));
    for (int64_t y = 0; y < height; ++y) {
        for (int64_t x = 0; x < width; ++x) {
            double value = 0.0;
            for (const auto& s : states) {
                const double radius_px = s.radius * min_dim;
                if (radius_px <= 0.0) continue;
                const double dx = static_cast<double>(x) - pixel_of_norm(s.center.x, width);
                const double dy = static_cast<double>(y) - pixel_of_norm(s.center.y, height);
                const double d = std::hypot(dx, dy) / radius_px;
                double fall;
                if (falloff == Falloff::Linear) {
                    fall = std::clamp(1.0 - d, 0.0, 1.0);
                } else {
                    fall = std::exp(-2.0 * d * d);
                }
                value = std::max(value, s.intensity * fall);
            }
            map.at(0, 0, y, x) = static_cast<float>(value);
        }
    }
    return map;
}

Tensor4 binarize_pixel(const Tensor4& maps, double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0) {
        throw Error(ErrorCode::InvalidArgument, "mask threshold must lie in (0,1)");
    }
    Tensor4 mask(maps.frames(), maps.channels(), maps.height(), maps.width());
    auto src = maps.data();
    auto dst = mask.data();
    for (size_t i = 0; i < src.size(); ++i) {
        dst[i] = src[i] >= static_cast<float>(threshold) ? 1.0f : 0.0f;
    }
    return mask;
}

Tensor4 binarize_latent(const Tensor4& masks_pixel, int scale) {
    if (scale < 1) {
        throw Error(ErrorCode::InvalidArgument, "latent scale must be >= 1");
    }
    if (masks_pixel.height() % scale != 0 || masks_pixel.width() % scale != 0) {
        throw Error(ErrorCode::InvalidArgument, "mask dims not divisible by latent scale");
    }
    const int64_t oh = masks_pixel.height() / scale;
    const int64_t ow = masks_pixel.width() / scale;
    Tensor4 latent(masks_pixel.frames(), masks_pixel.channels(), oh, ow);
    const int64_t half = static_cast<int64_t>(scale) * scale;  // coverage rule: count*2 >= s^2
    for (int64_t f = 0; f < masks_pixel.frames(); ++f) {
        for (int64_t c = 0; c < masks_pixel.channels(); ++c) {
            for (int64_t y = 0; y < oh; ++y) {
                for (int64_t x = 0; x < ow; ++x) {
                    int64_t count = 0;
                    for (int dy = 0; dy < scale; ++dy) {
                        for (int dx = 0; dx < scale; ++dx) {
                            if (masks_pixel.at(f, c, y * scale + dy, x * scale + dx) > 0.5f) ++count;
                        }
                    }
                    latent.at(f, c, y, x) = (count * 2 >= half) ? 1.0f : 0.0f;
                }
            }
        }
    }
    return latent;
}

LightMapSequence generate(const TrajectorySpec& spec, int64_t height, int64_t width,
                          double mask_threshold, int latent_scale, Falloff falloff) {
    const auto frames = interpolate(spec);
    LightMapSequence seq;
    seq.maps = Tensor4(spec.frame_count, 1, height, width);
    for (int64_t k = 0; k < spec.frame_count; ++k) {
        seq.maps.set_frame(k, rasterize(frames[static_cast<size_t>(k)], height, width, falloff));
    }
    seq.masks_pixel = binarize_pixel(seq.maps, mask_threshold);
    seq.masks_latent = binarize_latent(seq.masks_pixel, latent_scale);
    return seq;
}

TrajectorySpec parse_spec_json(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::BadConfig, std::string("trajectory JSON parse error: ") + e.what());
    }
    require(root.is_object(), "trajectory file must hold a JSON object");
    require(root.contains("frames") && root["frames"].is_number_integer(),
            "trajectory needs an integer \"frames\" field");
    TrajectorySpec spec;
    spec.frame_count = root["frames"].get<int64_t>();
    require(root.contains("sources") && root["sources"].is_array(),
            "trajectory needs a \"sources\" array");
    for (const auto& js : root["sources"]) {
        require(js.is_object(), "each source must be an object");
        SourceTrack track;
        const std::string pattern = js.value("pattern", "");
        if (pattern == "linear") {
            LinearPattern p;
            require(js.contains("start") && js.contains("end"), "linear source needs start and end");
            p.start = parse_point(js["start"], "start");
            p.end = parse_point(js["end"], "end");
            track.pattern = p;
        } else if (pattern == "circular") {
            CircularPattern p;
            require(js.contains("center"), "circular source needs a center");
            p.center = parse_point(js["center"], "center");
            p.orbit_radius = js.value("orbit_radius", 0.0);
            p.start_angle = js.value("start_angle", 0.0);
            p.end_angle = js.value("end_angle", 0.0);
            track.pattern = p;
        } else if (pattern == "polyline") {
            PolylinePattern p;
            require(js.contains("points") && js["points"].is_array(),
                    "polyline source needs a points array");
            for (const auto& jp : js["points"]) {
                p.waypoints.push_back(parse_point(jp, "polyline point"));
            }
            track.pattern = p;
        } else {
            throw Error(ErrorCode::BadConfig, "unknown pattern \"" + pattern + "\"");
        }
        if (js.contains("radius")) {
            const auto& jr = js["radius"];
            if (jr.is_array()) {
                require(jr.size() == 2, "radius array must be [r0, r1]");
                track.radius_start = jr[0].get<double>();
                track.radius_end = jr[1].get<double>();
            } else {
                track.radius_start = track.radius_end = jr.get<double>();
            }
        }
        track.intensity = js.value("intensity", 1.0);
        spec.sources.push_back(std::move(track));
    }
    validate(spec);
    return spec;
}

TrajectorySpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open trajectory file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_spec_json(buffer.str());
}

}  // namespace lightkit::traj
