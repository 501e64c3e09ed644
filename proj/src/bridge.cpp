// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/bridge.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "lightkit/tensor_io.hpp"

namespace lightkit::bridge {

namespace {

using nlohmann::json;

std::string stderr_tail(const std::filesystem::path& log, size_t max_bytes = 2048) {
    std::ifstream in(log, std::ios::binary);
    if (!in) return "";
    in.seekg(0, std::ios::end);
    const auto size = static_cast<size_t>(in.tellg());
    const auto offset = size > max_bytes ? size - max_bytes : 0;
    in.seekg(static_cast<std::streamoff>(offset));
    std::string tail(size - offset, '\0');
    in.read(tail.data(), static_cast<std::streamsize>(tail.size()));
    return tail;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    out += "'";
    return out;
}

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
};

ProcessResult run_command(const std::string& command_line, const std::filesystem::path& stderr_log,
                          double deadline_s) {
    const pid_t pid = fork();
    if (pid < 0) {
        throw Error(ErrorCode::SpawnError, "fork failed");
    }
    if (pid == 0) {
        const int fd = ::open(stderr_log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd >= 0) {
            ::dup2(fd, STDERR_FILENO);
            ::dup2(fd, STDOUT_FILENO);
            ::close(fd);
        }
        ::execl("/bin/sh", "sh", "-c", command_line.c_str(), nullptr);
        _exit(127);
    }
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(deadline_s));
    ProcessResult result;
    for (;;) {
        int status = 0;
        const pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) {
            result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128;
            return result;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            result.timed_out = true;
            return result;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
}

}  // namespace

BridgeClient::BridgeClient(BridgeOptions options) : options_(std::move(options)) {
    if (const char* env = std::getenv("LIGHTKIT_WORKDIR"); env != nullptr && *env != '\0') {
        options_.workdir = env;
    }
    if (options_.workdir.empty()) {
        options_.workdir = std::filesystem::temp_directory_path() / "lightkit-bridge";
    }
    if (options_.command.empty()) {
        throw Error(ErrorCode::BadConfig, "bridge command template is empty");
    }
}

Tensor4 BridgeClient::dispatch(const BridgeRequest& request) {
    return dispatch_full(request).tensor;
}

BridgeClient::DispatchResult BridgeClient::dispatch_full(const BridgeRequest& request) {
    const auto req_dir = options_.workdir / request.id;
    std::filesystem::create_directories(req_dir);

    json manifest;
    manifest["id"] = request.id;
    manifest["role"] = request.role;
    manifest["deadline_s"] = request.deadline_s;
    manifest["params"] = request.params;
    json inputs = json::object();
    for (const auto& [name, tensor] : request.inputs) {
        const auto path = req_dir / (name + ".lctk");
        save_tensor(tensor, path);
        inputs[name] = path.string();
    }
    manifest["inputs"] = inputs;
    {
        std::ofstream out(req_dir / "request.json");
        out << manifest.dump(2) << "\n";
    }

    const auto stderr_log = req_dir / "stderr.log";
    const std::string command_line = options_.command + " " + shell_quote(req_dir.string());
    const auto proc = run_command(command_line, stderr_log, request.deadline_s);

    auto fail = [&](ErrorCode code, const std::string& what) -> Error {
        // Failed request directories are left in place for replay.
        std::string message = "role " + request.role + " (" + request.id + "): " + what;
        const std::string tail = stderr_tail(stderr_log);
        if (!tail.empty()) {
            message += "; backend stderr: " + tail;
        }
        return Error(code, message);
    };

    if (proc.timed_out) {
        throw fail(ErrorCode::Timeout,
                   "backend exceeded deadline of " + std::to_string(request.deadline_s) + " s");
    }
    if (proc.exit_code == 127) {
        throw fail(ErrorCode::SpawnError, "command not found or not executable");
    }
    if (proc.exit_code != 0) {
        throw fail(ErrorCode::BackendFailed,
                   "backend exited with status " + std::to_string(proc.exit_code));
    }

    const auto response_path = req_dir / "response.json";
    if (!std::filesystem::exists(response_path)) {
        throw fail(ErrorCode::MalformedResponse, "backend wrote no response.json");
    }
    json response;
    try {
        std::ifstream in(response_path);
        in >> response;
    } catch (const std::exception& e) {
        throw fail(ErrorCode::MalformedResponse, std::string("response.json unreadable: ") + e.what());
    }
    if (response.value("status", "") == "error") {
        throw fail(ErrorCode::BackendFailed,
                   "backend reported: " + response.value("message", "(no message)"));
    }
    if (response.value("status", "") != "ok" || !response.contains("outputs") ||
        !response["outputs"].is_object() || !response["outputs"].contains("output")) {
        throw fail(ErrorCode::MalformedResponse, "response lacks status=ok or an \"output\" entry");
    }
    DispatchResult result;
    try {
        result.tensor =
            load_tensor(std::filesystem::path(response["outputs"]["output"].get<std::string>()));
    } catch (const Error& e) {
        throw fail(ErrorCode::MalformedResponse, std::string("output tensor unreadable: ") + e.what());
    }
    result.response = std::move(response);
    if (!options_.keep_artifacts) {
        std::error_code ec;
        std::filesystem::remove_all(req_dir, ec);
    }
    return result;
}

Tensor4 BridgeClient::dispatch(const std::string& role, const std::map<std::string, Tensor4>& inputs,
                               nlohmann::json params) {
    BridgeRequest request;
    request.id = "req-" + std::to_string(next_id_++);
    request.role = role;
    request.inputs = inputs;
    request.params = std::move(params);
    request.deadline_s = options_.deadline_s;
    return dispatch(request);
}

Capabilities BridgeClient::healthcheck() {
    Capabilities caps;
    const Tensor4 probe(1, 1, 8, 8, 0.5f);
    for (const char* role :
         {kRoleCodecEncode, kRoleCodecDecode, kRoleDenoise, kRoleRelight, kRoleNormals}) {
        BridgeRequest request;
        request.id = "probe-" + std::string(role) + "-" + std::to_string(next_id_++);
        request.role = role;
        request.inputs = {{"input", probe}};
        request.params = {{"probe", true}};
        request.deadline_s = options_.deadline_s;
        try {
            const auto result = dispatch_full(request);
            caps.roles.insert(role);
            // A backend may declare its latent scale in the probe response.
            caps.latent_scale = result.response.value("latent_scale", caps.latent_scale);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SpawnError) throw;
            continue;  // role unsupported by this backend
        }
    }
    return caps;
}

BridgeCodec::BridgeCodec(std::shared_ptr<BridgeClient> client, int declared_scale)
    : client_(std::move(client)), scale_(declared_scale) {
    if (scale_ < 1) {
        throw Error(ErrorCode::BadConfig, "bridge codec scale must be >= 1");
    }
}

Tensor4 BridgeCodec::encode(const Tensor4& video) {
    Tensor4 out = client_->dispatch(kRoleCodecEncode, {{"input", video}}, {{"scale", scale_}});
    if (out.frames() != video.frames() || out.height() != video.height() / scale_ ||
        out.width() != video.width() / scale_) {
        throw Error(ErrorCode::ShapeContract, "bridge codec encode returned mismatched dims");
    }
    return out;
}

Tensor4 BridgeCodec::decode(const Tensor4& latents) {
    Tensor4 out = client_->dispatch(kRoleCodecDecode, {{"input", latents}}, {{"scale", scale_}});
    if (out.frames() != latents.frames() || out.height() != latents.height() * scale_ ||
        out.width() != latents.width() * scale_) {
        throw Error(ErrorCode::ShapeContract, "bridge codec decode returned mismatched dims");
    }
    return out;
}

BridgeDenoiser::BridgeDenoiser(std::shared_ptr<BridgeClient> client) : client_(std::move(client)) {}

Tensor4 BridgeDenoiser::predict_z0(const Tensor4& z_t, int step, const traj::LightMapSequence& maps,
                                   const std::string& prompt) {
    Tensor4 out = client_->dispatch(
        kRoleDenoise,
        {{"input", z_t}, {"light_maps", maps.maps}, {"masks_latent", maps.masks_latent}},
        {{"step", step}, {"prompt", prompt}});
    if (!out.same_shape(z_t)) {
        throw Error(ErrorCode::ShapeContract, "bridge denoiser changed the latent shape");
    }
    return out;
}

BridgeRelighter::BridgeRelighter(std::shared_ptr<BridgeClient> client) : client_(std::move(client)) {}

Tensor4 BridgeRelighter::relight(const Tensor4& frame, const Tensor4& light_map,
                                 int64_t frame_index, const std::string& prompt) {
    Tensor4 out = client_->dispatch(kRoleRelight, {{"frames", frame}, {"light_maps", light_map}},
                                    {{"prompt", prompt}, {"frame_index", frame_index}});
    if (!out.same_shape(frame)) {
        throw Error(ErrorCode::ShapeContract, "bridge relighter changed the frame shape");
    }
    return out;
}

Tensor4 BridgeRelighter::relight_clip(const Tensor4& frames, const Tensor4& light_maps,
                                      const std::string& prompt, int /*jobs*/) {
    Tensor4 out = client_->dispatch(kRoleRelight, {{"frames", frames}, {"light_maps", light_maps}},
                                    {{"prompt", prompt}});
    if (!out.same_shape(frames)) {
        throw Error(ErrorCode::ShapeContract, "bridge relighter changed the clip shape");
    }
    return out;
}

BridgeNormalSource::BridgeNormalSource(std::shared_ptr<BridgeClient> client)
    : client_(std::move(client)) {}

Tensor4 BridgeNormalSource::normals(const Tensor4& video) {
    Tensor4 out = client_->dispatch(kRoleNormals, {{"input", video}});
    if (!out.same_shape(video)) {
        throw Error(ErrorCode::ShapeContract, "bridge normal source changed the video shape");
    }
    return out;
}

}  // namespace lightkit::bridge
