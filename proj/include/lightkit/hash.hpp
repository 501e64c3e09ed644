// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "lightkit/tensor.hpp"

namespace lightkit {

/// FNV-1a over raw bytes; used for stage fingerprints in run diagnostics.
inline uint64_t fnv1a64(std::span<const std::byte> bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (std::byte b : bytes) {
        h ^= static_cast<uint64_t>(b);
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t hash_tensor(const Tensor4& t) {
    return fnv1a64(std::as_bytes(t.data()));
}

inline std::string hash_hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace lightkit
