// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lightkit {

enum class ErrorCode {
    // tensor file format
    BadMagic,
    DimOverflow,
    TruncatedPayload,
    NonFinitePayload,
    // argument / contract violations
    ShapeMismatch,
    NonBinaryMask,
    InvalidArgument,
    BadConfig,
    IoFailure,
    // pipeline
    PluginFailure,
    NumericFailure,
    // bridge
    SpawnError,
    Timeout,
    BackendFailed,
    MalformedResponse,
    ShapeContract,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Process exit codes used by the CLI: 0 ok, 2 config/usage, 3 plugin/backend, 4 numeric.
int exit_code_for(ErrorCode code);

}  // namespace lightkit
