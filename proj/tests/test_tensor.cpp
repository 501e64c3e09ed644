// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <sstream>

#include "lightkit/tensor.hpp"
#include "lightkit/tensor_io.hpp"
#include "support/test_oracles.hpp"

using namespace lightkit;

TEST_CASE("smallest tensor round-trips through the LCTK format") {
    const Tensor4 t(1, 1, 1, 1, 0.5f);
    std::stringstream buf;
    save_tensor(t, buf);
    // header: magic + 3 u32 fields + 4 u64 dims, then one f32
    CHECK(buf.str().size() == 4 + 4 + 4 + 4 + 32 + 4);
    const Tensor4 back = load_tensor(buf);
    CHECK(back == t);
}

TEST_CASE("seeded tensor round-trips bit-exactly") {
    const Tensor4 t = oracle::random_tensor(16, 4, 8, 8, 42);
    std::stringstream buf;
    save_tensor(t, buf);
    const Tensor4 back = load_tensor(buf);
    REQUIRE(back.same_shape(t));
    auto a = t.data();
    auto b = back.data();
    for (size_t i = 0; i < a.size(); ++i) {
        // byte-level comparison oracle
        CHECK(std::memcmp(&a[i], &b[i], sizeof(float)) == 0);
    }
}

TEST_CASE("load rejects corrupt streams with distinct codes") {
    const Tensor4 t(1, 1, 2, 2, 0.25f);
    std::stringstream good;
    save_tensor(t, good);
    const std::string bytes = good.str();

    SUBCASE("bad magic") {
        std::string bad = bytes;
        bad[0] = 'X';
        bad[1] = 'X';
        bad[2] = 'X';
        bad[3] = 'X';
        std::stringstream in(bad);
        try {
            load_tensor(in);
            FAIL("expected BadMagic");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BadMagic);
        }
    }
    SUBCASE("dimension overflow") {
        std::string bad = bytes;
        const uint64_t huge = uint64_t{1} << 60;
        std::memcpy(bad.data() + 16, &huge, sizeof(huge));
        std::stringstream in(bad);
        try {
            load_tensor(in);
            FAIL("expected DimOverflow");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DimOverflow);
        }
    }
    SUBCASE("zero dimension counts as overflow") {
        std::string bad = bytes;
        const uint64_t zero = 0;
        std::memcpy(bad.data() + 16, &zero, sizeof(zero));
        std::stringstream in(bad);
        try {
            load_tensor(in);
            FAIL("expected DimOverflow");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DimOverflow);
        }
    }
    SUBCASE("truncated payload") {
        std::stringstream in(bytes.substr(0, bytes.size() - 5));
        try {
            load_tensor(in);
            FAIL("expected TruncatedPayload");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::TruncatedPayload);
        }
    }
    SUBCASE("non-finite payload") {
        std::string bad = bytes;
        const float nan = std::nanf("");
        std::memcpy(bad.data() + 48, &nan, sizeof(nan));
        std::stringstream in(bad);
        try {
            load_tensor(in);
            FAIL("expected NonFinitePayload");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonFinitePayload);
        }
    }
}

TEST_CASE("luminance of primary colors") {
    Image img(1, 3);
    img.at(0, 0, 0) = 1.0f;  // white pixel
    img.at(0, 0, 1) = 1.0f;
    img.at(0, 0, 2) = 1.0f;
    // black stays default-initialized at (0,1); red at (0,2)
    img.at(0, 2, 0) = 1.0f;
    const auto y = to_luminance(img);
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(0.0));
    CHECK(y[2] == doctest::Approx(0.299));
}

TEST_CASE("area resampling") {
    SUBCASE("constant stays constant") {
        const Tensor4 t(2, 3, 4, 4, 0.37f);
        const Tensor4 r = resample_area(t, 2);
        for (float v : r.data()) CHECK(v == doctest::Approx(0.37f));
    }
    SUBCASE("2x2 block averages to its mean") {
        Tensor4 t(1, 1, 2, 2);
        t.at(0, 0, 0, 0) = 0.0f;
        t.at(0, 0, 0, 1) = 1.0f;
        t.at(0, 0, 1, 0) = 1.0f;
        t.at(0, 0, 1, 1) = 0.0f;
        const Tensor4 r = resample_area(t, 2);
        CHECK(r.at(0, 0, 0, 0) == doctest::Approx(0.5));
    }
    SUBCASE("checkerboard against brute-force block averaging") {
        Tensor4 t(1, 1, 8, 8);
        for (int64_t y = 0; y < 8; ++y) {
            for (int64_t x = 0; x < 8; ++x) {
                t.at(0, 0, y, x) = static_cast<float>((x + y) % 2);
            }
        }
        const Tensor4 r = resample_area(t, 4);
        for (int64_t y = 0; y < 2; ++y) {
            for (int64_t x = 0; x < 2; ++x) {
                double acc = 0.0;  // independent block average
                for (int dy = 0; dy < 4; ++dy) {
                    for (int dx = 0; dx < 4; ++dx) {
                        acc += t.at(0, 0, y * 4 + dy, x * 4 + dx);
                    }
                }
                CHECK(r.at(0, 0, y, x) == doctest::Approx(acc / 16.0));
            }
        }
    }
    SUBCASE("preserves the global mean of each slice") {
        const Tensor4 t = oracle::random_tensor(3, 2, 16, 16, 7);
        const Tensor4 r = resample_area(t, 4);
        for (int64_t f = 0; f < 3; ++f) {
            for (int64_t c = 0; c < 2; ++c) {
                double m0 = 0.0, m1 = 0.0;
                for (int64_t y = 0; y < 16; ++y)
                    for (int64_t x = 0; x < 16; ++x) m0 += t.at(f, c, y, x);
                for (int64_t y = 0; y < 4; ++y)
                    for (int64_t x = 0; x < 4; ++x) m1 += r.at(f, c, y, x);
                m0 /= 256.0;
                m1 /= 16.0;
                CHECK(std::abs(m0 - m1) <= 1e-6 * std::max(1.0, std::abs(m0)));
            }
        }
    }
    SUBCASE("rejects non-divisible dims") {
        const Tensor4 t(1, 1, 5, 4, 0.0f);
        CHECK_THROWS_AS(resample_area(t, 2), Error);
    }
}

TEST_CASE("lerp endpoints and monotonicity") {
    const Tensor4 a = oracle::random_tensor(2, 1, 4, 4, 1);
    const Tensor4 b = oracle::random_tensor(2, 1, 4, 4, 2);
    CHECK(lerp(a, b, 0.0) == a);
    CHECK(lerp(a, b, 1.0) == b);

    const Tensor4 zeros(1, 1, 2, 2, 0.0f);
    const Tensor4 ones(1, 1, 2, 2, 1.0f);
    for (float v : lerp(zeros, ones, 0.8).data()) CHECK(v == doctest::Approx(0.8));

    // monotone in w when a <= b elementwise
    const Tensor4 lo = lerp(zeros, ones, 0.3);
    const Tensor4 hi = lerp(zeros, ones, 0.6);
    auto plo = lo.data();
    auto phi = hi.data();
    for (size_t i = 0; i < plo.size(); ++i) CHECK(plo[i] <= phi[i]);

    const Tensor4 other(1, 1, 2, 3, 0.0f);
    CHECK_THROWS_AS(lerp(zeros, other, 0.5), Error);
}

TEST_CASE("PPM write/read quantization") {
    const Tensor4 video = oracle::random_video01(2, 6, 5, 99);
    const auto dir = std::filesystem::temp_directory_path() / "lightkit_ppm_test";
    std::filesystem::remove_all(dir);
    write_video_ppm(video, dir);
    const Tensor4 back = read_video_ppm(dir);
    REQUIRE(back.same_shape(video));
    CHECK(oracle::max_abs_diff(video, back) <= 0.5 / 255.0 + 1e-6);
    std::filesystem::remove_all(dir);
}

TEST_CASE("tensor invariants") {
    CHECK_THROWS_AS(Tensor4(0, 1, 1, 1), Error);
    CHECK_THROWS_AS(Tensor4(1, 1, 2, 2, std::vector<float>{1.0f}), Error);
    Tensor4 t(1, 1, 1, 2, std::vector<float>{1.0f, 2.0f});
    CHECK_NOTHROW(t.check_finite("test"));
    t.at(0, 0, 0, 1) = std::numeric_limits<float>::infinity();
    CHECK_THROWS_AS(t.check_finite("test"), Error);
}
