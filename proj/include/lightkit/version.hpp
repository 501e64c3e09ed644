// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace lightkit {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace lightkit
