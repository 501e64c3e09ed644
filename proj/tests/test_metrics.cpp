// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lightkit/metrics.hpp"
#include "lightkit/noise.hpp"
#include "support/test_oracles.hpp"

using namespace lightkit;
using namespace lightkit::metrics;

TEST_CASE("psnr closed forms") {
    const Tensor4 a(2, 3, 4, 4, 0.25f);
    SUBCASE("identical tensors cap at 99 dB") { CHECK(psnr(a, a) == doctest::Approx(99.0)); }
    SUBCASE("constant difference 0.5 gives 6.0206 dB") {
        const Tensor4 b(2, 3, 4, 4, 0.75f);
        CHECK(psnr(a, b) == doctest::Approx(6.0206).epsilon(1e-4));
    }
    SUBCASE("mask excluding every differing pixel caps") {
        Tensor4 b = a;
        b.at(0, 0, 1, 1) = 0.9f;
        Tensor4 mask(2, 1, 4, 4, 1.0f);
        mask.at(0, 0, 1, 1) = 0.0f;
        CHECK(psnr(a, b, &mask) == doctest::Approx(99.0));
    }
    SUBCASE("empty mask region is an error") {
        const Tensor4 mask(2, 1, 4, 4, 0.0f);
        CHECK_THROWS_AS(psnr(a, a, &mask), Error);
    }
    SUBCASE("symmetry and translation invariance") {
        const Tensor4 x = oracle::random_video01(2, 4, 4, 1);
        const Tensor4 y = oracle::random_video01(2, 4, 4, 2);
        CHECK(psnr(x, y) == doctest::Approx(psnr(y, x)));
        Tensor4 xs = x, ys = y;
        for (float& v : xs.data()) v += 0.1f;
        for (float& v : ys.data()) v += 0.1f;
        CHECK(psnr(xs, ys) == doctest::Approx(psnr(x, y)).epsilon(1e-4));
    }
}

TEST_CASE("luminance-vs-white metric") {
    SUBCASE("pure white inside the masks caps at 99 dB") {
        const Tensor4 video(2, 3, 4, 4, 1.0f);
        const Tensor4 masks(2, 1, 4, 4, 1.0f);
        CHECK(psnr_y(video, masks) == doctest::Approx(99.0));
    }
    SUBCASE("half-luminance inside the masks gives 6.0206 dB") {
        const Tensor4 video(2, 3, 4, 4, 0.5f);
        const Tensor4 masks(2, 1, 4, 4, 1.0f);
        CHECK(psnr_y(video, masks) == doctest::Approx(6.0206).epsilon(1e-4));
    }
    SUBCASE("brightening masked pixels strictly raises the score") {
        const Tensor4 video = oracle::random_video01(3, 8, 8, 3);
        Tensor4 brighter = video;
        for (float& v : brighter.data()) v = std::min(1.0f, v + 0.2f);
        Tensor4 masks(3, 1, 8, 8, 0.0f);
        for (int64_t y = 2; y < 6; ++y)
            for (int64_t x = 2; x < 6; ++x) masks.at(1, 0, y, x) = 1.0f;
        CHECK(psnr_y(brighter, masks) > psnr_y(video, masks));
    }
    SUBCASE("per-frame breakdown skips empty frames") {
        const Tensor4 video(3, 3, 4, 4, 0.5f);
        Tensor4 masks(3, 1, 4, 4, 0.0f);
        masks.at(1, 0, 2, 2) = 1.0f;
        std::vector<double> per_frame;
        (void)psnr_y(video, masks, kLumaBt601, &per_frame);
        CHECK(std::isnan(per_frame[0]));
        CHECK_FALSE(std::isnan(per_frame[1]));
        CHECK(std::isnan(per_frame[2]));
    }
    SUBCASE("all-empty masks are an error") {
        const Tensor4 video(2, 3, 4, 4, 0.5f);
        const Tensor4 masks(2, 1, 4, 4, 0.0f);
        CHECK_THROWS_AS(psnr_y(video, masks), Error);
    }
}

TEST_CASE("overlay metric") {
    const Tensor4 source = oracle::random_video01(2, 6, 6, 4);
    Tensor4 maps(2, 1, 6, 6, 0.0f);
    for (int64_t y = 1; y < 4; ++y)
        for (int64_t x = 1; x < 4; ++x) maps.at(0, 0, y, x) = 0.6f;

    SUBCASE("result equal to the overlay caps at 99 dB") {
        const Tensor4 overlay = overlay_light(source, maps);
        CHECK(psnr_light(overlay, source, maps) == doctest::Approx(99.0));
    }
    SUBCASE("zero maps reduce the metric to plain psnr against the source") {
        const Tensor4 zero_maps(2, 1, 6, 6, 0.0f);
        const Tensor4 result = oracle::random_video01(2, 6, 6, 5);
        CHECK(psnr_light(result, source, zero_maps) == psnr(result, source));
    }
    SUBCASE("seeded triple against an independent scalar loop") {
        const Tensor4 result = oracle::random_video01(2, 6, 6, 6);
        const double got = psnr_light(result, source, maps, 0.8);
        // brute-force pixel loop
        double acc = 0.0;
        int64_t count = 0;
        for (int64_t f = 0; f < 2; ++f) {
            for (int64_t c = 0; c < 3; ++c) {
                for (int64_t y = 0; y < 6; ++y) {
                    for (int64_t x = 0; x < 6; ++x) {
                        const double ov = std::clamp(
                            static_cast<double>(source.at(f, c, y, x)) + 0.8 * maps.at(f, 0, y, x),
                            0.0, 1.0);
                        const double d = result.at(f, c, y, x) - ov;
                        acc += d * d;
                        ++count;
                    }
                }
            }
        }
        const double expected = 10.0 * std::log10(1.0 / (acc / static_cast<double>(count)));
        CHECK(got == doctest::Approx(expected).epsilon(1e-6));
    }
    SUBCASE("alpha overlay blends toward white") {
        const Tensor4 overlay = overlay_light(source, maps, 1.0, OverlayMode::Alpha);
        const double expected =
            (1.0 - 0.6) * source.at(0, 0, 2, 2) + 0.6;
        CHECK(overlay.at(0, 0, 2, 2) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("temporal consistency") {
    SUBCASE("static video caps at 99 dB") {
        Tensor4 video(4, 3, 4, 4, 0.3f);
        CHECK(temporal_consistency(video) == doctest::Approx(99.0));
    }
    SUBCASE("alternating black and white frames give 0 dB") {
        Tensor4 video(4, 3, 4, 4, 0.0f);
        for (int64_t f = 1; f < 4; f += 2) {
            for (int64_t c = 0; c < 3; ++c)
                for (int64_t y = 0; y < 4; ++y)
                    for (int64_t x = 0; x < 4; ++x) video.at(f, c, y, x) = 1.0f;
        }
        CHECK(temporal_consistency(video) == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("frame noise of sigma 0.1 lands near the closed form") {
        const double sigma = 0.1;
        Tensor4 video(6, 3, 64, 64, 0.5f);
        for (int64_t f = 0; f < 6; ++f)
            for (int64_t c = 0; c < 3; ++c)
                for (int64_t y = 0; y < 64; ++y)
                    for (int64_t x = 0; x < 64; ++x)
                        video.at(f, c, y, x) += static_cast<float>(
                            sigma * noise::gaussian(55, static_cast<uint64_t>(f),
                                                    static_cast<uint64_t>(c), 0,
                                                    static_cast<uint64_t>(y),
                                                    static_cast<uint64_t>(x)));
        const double expected = 10.0 * std::log10(1.0 / (2.0 * sigma * sigma));
        CHECK(temporal_consistency(video) == doctest::Approx(expected).epsilon(0.03));
    }
    SUBCASE("single frame is an error") {
        const Tensor4 video(1, 3, 4, 4, 0.1f);
        CHECK_THROWS_AS(temporal_consistency(video), Error);
    }
}

TEST_CASE("centroid tracking") {
    traj::TrajectorySpec spec;
    spec.frame_count = 5;
    traj::SourceTrack track;
    track.pattern = traj::LinearPattern{{0.25, 0.5}, {0.75, 0.5}};
    track.radius_start = track.radius_end = 0.2;
    spec.sources.push_back(track);

    SUBCASE("the rasterized maps track themselves within a pixel") {
        const auto seq = traj::generate(spec, 64, 64, 0.3, 1);
        Tensor4 video(5, 3, 64, 64);
        for (int64_t f = 0; f < 5; ++f)
            for (int c = 0; c < 3; ++c)
                for (int64_t y = 0; y < 64; ++y)
                    for (int64_t x = 0; x < 64; ++x)
                        video.at(f, c, y, x) = seq.maps.at(f, 0, y, x);
        CHECK(centroid_track_error(video, spec) < 1.0 / 64.0);
    }
    SUBCASE("uniform video centroid sits at the image center") {
        const Tensor4 video(5, 3, 64, 64, 0.5f);
        std::vector<double> per_frame;
        (void)centroid_track_error(video, spec, &per_frame);
        // frame 2 has the trajectory at the center: error ~ 0
        CHECK(per_frame[2] == doctest::Approx(0.0).epsilon(1e-6));
        // frame 0 sits at x=0.25: distance 0.25 of the width
        CHECK(per_frame[0] == doctest::Approx(0.25).epsilon(0.01));
    }
    SUBCASE("all-black video is an error") {
        const Tensor4 video(5, 3, 16, 16, 0.0f);
        CHECK_THROWS_AS(centroid_track_error(video, spec), Error);
    }
    SUBCASE("frame count mismatch is an error") {
        const Tensor4 video(4, 3, 16, 16, 0.5f);
        CHECK_THROWS_AS(centroid_track_error(video, spec), Error);
    }
}

TEST_CASE("report serializes to JSON") {
    MetricReport report;
    report.psnr_y = 10.5;
    report.psnr_light = 17.2;
    report.temporal_consistency = 30.0;
    report.centroid_track_error = 0.05;
    report.psnr_y_per_frame = {10.0, NAN, 11.0};
    const std::string text = report.to_json();
    CHECK(text.find("\"psnr_y\"") != std::string::npos);
    CHECK(text.find("null") != std::string::npos);  // NaN frames serialize as null
}
