// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/tensor_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace lightkit {

namespace {

constexpr char kMagic[4] = {'L', 'C', 'T', 'K'};
constexpr uint32_t kVersion = 1;
constexpr uint32_t kDtypeF32 = 1;
constexpr uint32_t kNdim = 4;
// Generous allocation guard; anything larger is a corrupt or hostile header.
constexpr uint64_t kMaxElements = uint64_t{1} << 33;

static_assert(std::endian::native == std::endian::little,
              "LCTK writer assumes a little-endian host");

template <typename T>
void write_le(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) {
        throw Error(ErrorCode::TruncatedPayload, "unexpected end of stream in header");
    }
    return value;
}

}  // namespace

void save_tensor(const Tensor4& t, std::ostream& out) {
    out.write(kMagic, 4);
    write_le(out, kVersion);
    write_le(out, kDtypeF32);
    write_le(out, kNdim);
    write_le(out, static_cast<uint64_t>(t.frames()));
    write_le(out, static_cast<uint64_t>(t.channels()));
    write_le(out, static_cast<uint64_t>(t.height()));
    write_le(out, static_cast<uint64_t>(t.width()));
    out.write(reinterpret_cast<const char*>(t.data().data()),
              static_cast<std::streamsize>(t.data().size() * sizeof(float)));
    if (!out) {
        throw Error(ErrorCode::IoFailure, "tensor write failed");
    }
}

void save_tensor(const Tensor4& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    }
    save_tensor(t, out);
}

Tensor4 load_tensor(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw Error(ErrorCode::BadMagic, "stream does not start with LCTK magic");
    }
    const auto version = read_le<uint32_t>(in);
    if (version != kVersion) {
        throw Error(ErrorCode::BadMagic, "unsupported LCTK version " + std::to_string(version));
    }
    const auto dtype = read_le<uint32_t>(in);
    if (dtype != kDtypeF32) {
        throw Error(ErrorCode::BadMagic, "unsupported dtype code " + std::to_string(dtype));
    }
    const auto ndim = read_le<uint32_t>(in);
    if (ndim != kNdim) {
        throw Error(ErrorCode::BadMagic, "unsupported ndim " + std::to_string(ndim));
    }
    std::array<uint64_t, 4> dims{};
    uint64_t total = 1;
    for (auto& d : dims) {
        d = read_le<uint64_t>(in);
        if (d == 0 || d > kMaxElements) {
            throw Error(ErrorCode::DimOverflow, "dimension " + std::to_string(d) + " out of range");
        }
        if (total > kMaxElements / d) {
            throw Error(ErrorCode::DimOverflow, "dims product overflows element limit");
        }
        total *= d;
    }
    std::vector<float> data(total);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(total * sizeof(float)));
    if (static_cast<uint64_t>(in.gcount()) != total * sizeof(float)) {
        throw Error(ErrorCode::TruncatedPayload,
                    "payload shorter than dims imply (" + std::to_string(in.gcount()) + " bytes read)");
    }
    for (float v : data) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFinitePayload, "payload contains NaN or infinity");
        }
    }
    return Tensor4(static_cast<int64_t>(dims[0]), static_cast<int64_t>(dims[1]),
                   static_cast<int64_t>(dims[2]), static_cast<int64_t>(dims[3]), std::move(data));
}

Tensor4 load_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    return load_tensor(in);
}

namespace {

uint8_t quantize8(float v) {
    const float clamped = std::clamp(v, 0.0f, 1.0f);
    return static_cast<uint8_t>(std::lround(clamped * 255.0f));
}

int read_ppm_token(std::istream& in) {
    // Skips whitespace and '#' comments between header fields.
    while (in) {
        const int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value = -1;
    in >> value;
    return in ? value : -1;
}

}  // namespace

void write_ppm(const Tensor4& video, int64_t f, const std::filesystem::path& path) {
    if (video.channels() != 3) {
        throw Error(ErrorCode::ShapeMismatch, "PPM output expects a 3-channel tensor");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    }
    out << "P6\n" << video.width() << " " << video.height() << "\n255\n";
    std::vector<uint8_t> row(static_cast<size_t>(video.width()) * 3);
    for (int64_t y = 0; y < video.height(); ++y) {
        for (int64_t x = 0; x < video.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                row[static_cast<size_t>(x) * 3 + c] = quantize8(video.at(f, c, y, x));
            }
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) {
        throw Error(ErrorCode::IoFailure, "PPM write failed for " + path.string());
    }
}

Image read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    std::string tag;
    in >> tag;
    if (tag != "P6") {
        throw Error(ErrorCode::BadMagic, path.string() + " is not a binary PPM (P6)");
    }
    const int width = read_ppm_token(in);
    const int height = read_ppm_token(in);
    const int maxval = read_ppm_token(in);
    if (width < 1 || height < 1) {
        throw Error(ErrorCode::DimOverflow, "invalid PPM dimensions in " + path.string());
    }
    if (maxval != 255) {
        throw Error(ErrorCode::BadMagic, "PPM maxval must be 255 in " + path.string());
    }
    in.get();  // single whitespace after maxval
    Image img(height, width);
    std::vector<uint8_t> raw(static_cast<size_t>(width) * height * 3);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size()) {
        throw Error(ErrorCode::TruncatedPayload, "PPM pixel data truncated in " + path.string());
    }
    for (size_t i = 0; i < raw.size(); ++i) {
        img.pixels[i] = static_cast<float>(raw[i]) / 255.0f;
    }
    return img;
}

void write_video_ppm(const Tensor4& video, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (int64_t f = 0; f < video.frames(); ++f) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%04lld.ppm", static_cast<long long>(f));
        write_ppm(video, f, dir / name);
    }
}

Tensor4 read_video_ppm(const std::filesystem::path& dir) {
    std::map<std::string, std::filesystem::path> frames;
    if (!std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::IoFailure, dir.string() + " is not a directory");
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.starts_with("frame_") && name.ends_with(".ppm")) {
            frames.emplace(name, entry.path());
        }
    }
    if (frames.empty()) {
        throw Error(ErrorCode::IoFailure, "no frame_*.ppm files in " + dir.string());
    }
    Tensor4 video;
    int64_t f = 0;
    for (const auto& [name, path] : frames) {
        const Image img = read_ppm(path);
        if (f == 0) {
            video = Tensor4(static_cast<int64_t>(frames.size()), 3, img.height, img.width);
        } else if (img.height != video.height() || img.width != video.width()) {
            throw Error(ErrorCode::ShapeMismatch, "frame size changes at " + name);
        }
        for (int64_t y = 0; y < img.height; ++y) {
            for (int64_t x = 0; x < img.width; ++x) {
                for (int c = 0; c < 3; ++c) {
                    video.at(f, c, y, x) = img.at(y, x, c);
                }
            }
        }
        ++f;
    }
    return video;
}

}  // namespace lightkit
