// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/error.hpp"

namespace lightkit {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::DimOverflow: return "DimOverflow";
        case ErrorCode::TruncatedPayload: return "TruncatedPayload";
        case ErrorCode::NonFinitePayload: return "NonFinitePayload";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NonBinaryMask: return "NonBinaryMask";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::PluginFailure: return "PluginFailure";
        case ErrorCode::NumericFailure: return "NumericFailure";
        case ErrorCode::SpawnError: return "SpawnError";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::BackendFailed: return "BackendFailed";
        case ErrorCode::MalformedResponse: return "MalformedResponse";
        case ErrorCode::ShapeContract: return "ShapeContract";
    }
    return "UnknownError";
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NumericFailure:
        case ErrorCode::NonFinitePayload:
            return 4;
        case ErrorCode::PluginFailure:
        case ErrorCode::SpawnError:
        case ErrorCode::Timeout:
        case ErrorCode::BackendFailed:
        case ErrorCode::MalformedResponse:
        case ErrorCode::ShapeContract:
            return 3;
        default:
            return 2;
    }
}

}  // namespace lightkit
