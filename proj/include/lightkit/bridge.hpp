// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>

#include <json.hpp>

#include "lightkit/plugins.hpp"
#include "lightkit/tensor.hpp"
#include "lightkit/trajectory.hpp"

namespace lightkit::bridge {

// File handshake with an external backend process. For every request the
// client creates workdir/<id>/ holding the input tensors (LCTK) and a
// request.json:
//   {"id", "role", "inputs": {name: path}, "params": {...}, "deadline_s"}
// then invokes the command template with the request directory as its sole
// argument and waits (bounded by the deadline) for a response.json:
//   {"id", "status": "ok"|"error", "outputs": {name: path}, "message"}

inline constexpr const char* kRoleCodecEncode = "codec_encode";
inline constexpr const char* kRoleCodecDecode = "codec_decode";
inline constexpr const char* kRoleDenoise = "denoise";
inline constexpr const char* kRoleRelight = "relight";
inline constexpr const char* kRoleNormals = "normals";

struct BridgeOptions {
    std::string command;                // shell command; request dir is appended
    std::filesystem::path workdir;      // per-request directories live here
    double deadline_s = 120.0;
    bool keep_artifacts = false;
};

struct BridgeRequest {
    std::string id;
    std::string role;
    std::map<std::string, Tensor4> inputs;
    nlohmann::json params;
    double deadline_s = 120.0;
};

struct Capabilities {
    std::set<std::string> roles;
    int latent_scale = 1;
};

class BridgeClient {
public:
    /// The LIGHTKIT_WORKDIR environment variable overrides options.workdir.
    explicit BridgeClient(BridgeOptions options);

    /// Runs one request through the backend and returns its "output" tensor.
    Tensor4 dispatch(const BridgeRequest& request);

    Tensor4 dispatch(const std::string& role, const std::map<std::string, Tensor4>& inputs,
                     nlohmann::json params = nlohmann::json::object());

    /// Probes every role with a 1x1x8x8 tensor; reports which respond and the
    /// latent scale the backend declares (default 1).
    Capabilities healthcheck();

    const BridgeOptions& options() const { return options_; }

private:
    struct DispatchResult {
        Tensor4 tensor;
        nlohmann::json response;
    };
    DispatchResult dispatch_full(const BridgeRequest& request);

    BridgeOptions options_;
    uint64_t next_id_ = 0;
};

// Plugin adapters that forward the pipeline's plugin contracts to a backend.

class BridgeCodec : public plugins::Codec {
public:
    BridgeCodec(std::shared_ptr<BridgeClient> client, int declared_scale);
    Tensor4 encode(const Tensor4& video) override;
    Tensor4 decode(const Tensor4& latents) override;
    int latent_scale() const override { return scale_; }

private:
    std::shared_ptr<BridgeClient> client_;
    int scale_;
};

class BridgeDenoiser : public plugins::Denoiser {
public:
    explicit BridgeDenoiser(std::shared_ptr<BridgeClient> client);
    Tensor4 predict_z0(const Tensor4& z_t, int step, const traj::LightMapSequence& maps,
                       const std::string& prompt) override;

private:
    std::shared_ptr<BridgeClient> client_;
};

class BridgeRelighter : public plugins::Relighter {
public:
    explicit BridgeRelighter(std::shared_ptr<BridgeClient> client);
    Tensor4 relight(const Tensor4& frame, const Tensor4& light_map, int64_t frame_index,
                    const std::string& prompt) override;
    Tensor4 relight_clip(const Tensor4& frames, const Tensor4& light_maps, const std::string& prompt,
                         int jobs) override;

private:
    std::shared_ptr<BridgeClient> client_;
};

class BridgeNormalSource : public plugins::NormalSource {
public:
    explicit BridgeNormalSource(std::shared_ptr<BridgeClient> client);
    Tensor4 normals(const Tensor4& video) override;

private:
    std::shared_ptr<BridgeClient> client_;
};

}  // namespace lightkit::bridge
