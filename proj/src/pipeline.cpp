// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include "lightkit/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lightkit/bridge.hpp"
#include "lightkit/freq_fusion.hpp"
#include "lightkit/hash.hpp"
#include "lightkit/injection.hpp"
#include "lightkit/noise.hpp"
#include "lightkit/parallel.hpp"
#include "lightkit/tensor_io.hpp"

namespace lightkit::pipeline {

namespace {

using nlohmann::json;

Tensor4 add_tensors(const Tensor4& a, const Tensor4& b) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::ShapeMismatch, "tensor addition operands differ in shape");
    }
    Tensor4 out = a;
    auto dst = out.data();
    auto src = b.data();
    for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    return out;
}

template <typename Fn>
auto guarded(const char* stage, int step, Fn&& fn) {
    try {
        return fn();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::PluginFailure, std::string(stage) + " failed at step " +
                                                  std::to_string(step) + ": " + e.what());
    }
}

}  // namespace

void validate(const PipelineConfig& cfg) {
    if (cfg.t_m < 1) throw Error(ErrorCode::BadConfig, "t_m must be >= 1");
    if (cfg.omega < 0.0 || cfg.omega > 1.0) throw Error(ErrorCode::BadConfig, "omega must lie in [0,1]");
    if (cfg.butterworth_order < 1) throw Error(ErrorCode::BadConfig, "butterworth_order must be >= 1");
    if (cfg.alpha_min <= 0.0 || cfg.alpha_min > 1.0) {
        throw Error(ErrorCode::BadConfig, "alpha_min must lie in (0,1]");
    }
    if (cfg.mask_threshold <= 0.0 || cfg.mask_threshold >= 1.0) {
        throw Error(ErrorCode::BadConfig, "mask_threshold must lie in (0,1)");
    }
    if (cfg.latent_scale < 1) throw Error(ErrorCode::BadConfig, "latent_scale must be >= 1");
    if (cfg.gamma_end <= 0.0 || cfg.gamma_end > 1.0) {
        throw Error(ErrorCode::BadConfig, "gamma_end must lie in (0,1]");
    }
}

double signal_at_depth(int depth, int total_steps, double gamma_end) {
    if (depth < 0 || depth > total_steps) {
        throw Error(ErrorCode::InvalidArgument, "noising depth outside 0..total_steps");
    }
    return 1.0 - (1.0 - gamma_end) * static_cast<double>(depth) / static_cast<double>(total_steps);
}

Tensor4 add_noise(const Tensor4& z0, double gamma, uint64_t noise_stream, uint64_t seed, int jobs) {
    if (gamma <= 0.0 || gamma > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "signal retention must lie in (0,1]");
    }
    if (gamma == 1.0) return z0;
    const double sqrt_g = std::sqrt(gamma);
    const double sqrt_1mg = std::sqrt(1.0 - gamma);
    Tensor4 out(z0.frames(), z0.channels(), z0.height(), z0.width());
    parallel_for(z0.frames(), jobs, [&](int64_t f) {
        for (int64_t c = 0; c < z0.channels(); ++c) {
            for (int64_t y = 0; y < z0.height(); ++y) {
                for (int64_t x = 0; x < z0.width(); ++x) {
                    const double eps =
                        noise::gaussian(seed, noise_stream, static_cast<uint64_t>(f),
                                        static_cast<uint64_t>(c), static_cast<uint64_t>(y),
                                        static_cast<uint64_t>(x));
                    out.at(f, c, y, x) = static_cast<float>(
                        sqrt_g * static_cast<double>(z0.at(f, c, y, x)) + sqrt_1mg * eps);
                }
            }
        }
    });
    return out;
}

Tensor4 compute_residual(const Tensor4& source_video, const Tensor4& first_decode) {
    if (!source_video.same_shape(first_decode)) {
        throw Error(ErrorCode::ShapeMismatch, "residual operands differ in shape");
    }
    Tensor4 out = source_video;
    auto dst = out.data();
    auto sub = first_decode.data();
    for (size_t i = 0; i < dst.size(); ++i) dst[i] -= sub[i];
    return out;
}

Tensor4 progressive_fuse(const Tensor4& consistency, const Tensor4& relit, double lambda) {
    return lerp(consistency, relit, lambda);
}

std::string RunDiagnostics::to_jsonl() const {
    std::ostringstream out;
    json run;
    run["record"] = "run";
    run["hash_source"] = hash_hex(hash_source);
    run["hash_z0"] = hash_hex(hash_z0);
    run["hash_noised"] = hash_hex(hash_noised);
    run["hash_injected"] = hash_hex(hash_injected);
    run["hash_maps"] = hash_hex(hash_maps);
    run["hash_masks_pixel"] = hash_hex(hash_masks_pixel);
    run["hash_masks_latent"] = hash_hex(hash_masks_latent);
    run["hash_normals"] = hash_hex(hash_normals);
    run["hash_residual"] = hash_hex(hash_residual);
    run["hash_final"] = hash_hex(hash_final);
    out << run.dump() << "\n";
    for (const auto& s : steps) {
        json j;
        j["record"] = "step";
        j["step"] = s.step;
        j["lambda"] = s.lambda;
        j["alpha"] = s.alpha;
        j["gamma_next"] = s.gamma_next;
        j["fuse_imag"] = s.fuse_imag;
        j["hash_prediction"] = hash_hex(s.hash_prediction);
        j["hash_consistency"] = hash_hex(s.hash_consistency);
        j["hash_relight_input"] = hash_hex(s.hash_relight_input);
        j["hash_relit"] = hash_hex(s.hash_relit);
        j["hash_fusion_target"] = hash_hex(s.hash_fusion_target);
        j["hash_latents"] = hash_hex(s.hash_latents);
        j["millis"] = s.millis;
        out << j.dump() << "\n";
    }
    return out.str();
}

PluginSet make_plugins(const PipelineConfig& cfg, const Tensor4& source_video) {
    PluginSet set;

    std::shared_ptr<bridge::BridgeClient> client;
    auto bridge_client = [&]() {
        if (!client) {
            if (cfg.bridge_command.empty()) {
                throw Error(ErrorCode::BadConfig, "bridge plugin selected but bridge_command is empty");
            }
            bridge::BridgeOptions opts;
            opts.command = cfg.bridge_command;
            opts.workdir = cfg.bridge_workdir.empty()
                               ? std::filesystem::temp_directory_path() / "lightkit-bridge"
                               : std::filesystem::path(cfg.bridge_workdir);
            opts.deadline_s = cfg.bridge_deadline_s;
            opts.keep_artifacts = cfg.bridge_keep_artifacts;
            client = std::make_shared<bridge::BridgeClient>(opts);
        }
        return client;
    };

    auto scene_frames = [&](const char* sub) {
        if (cfg.scene_dir.empty()) {
            throw Error(ErrorCode::BadConfig,
                        std::string("plugin needs scene_dir with a ") + sub + " directory");
        }
        return read_video_ppm(std::filesystem::path(cfg.scene_dir) / sub);
    };

    if (cfg.codec == "identity") {
        set.codec = std::make_shared<plugins::IdentityCodec>(cfg.latent_scale);
    } else if (cfg.codec == "bridge") {
        set.codec = std::make_shared<bridge::BridgeCodec>(bridge_client(), cfg.latent_scale);
    } else {
        throw Error(ErrorCode::BadConfig, "unknown codec plugin \"" + cfg.codec + "\"");
    }

    if (cfg.denoiser == "oracle") {
        set.denoiser = std::make_shared<plugins::OracleDenoiser>(cfg.seed, cfg.t_m, cfg.gamma_end);
    } else if (cfg.denoiser == "bridge") {
        set.denoiser = std::make_shared<bridge::BridgeDenoiser>(bridge_client());
    } else {
        throw Error(ErrorCode::BadConfig, "unknown denoiser plugin \"" + cfg.denoiser + "\"");
    }

    if (cfg.relighter == "lambertian") {
        Tensor4 albedo = cfg.scene_dir.empty() ? source_video : scene_frames("albedo");
        set.relighter = std::make_shared<plugins::LambertianRelighter>(
            std::move(albedo), plugins::LambertianParams{cfg.relight_ambient, cfg.relight_gain});
    } else if (cfg.relighter == "identity") {
        set.relighter = std::make_shared<plugins::IdentityRelighter>();
    } else if (cfg.relighter == "bridge") {
        set.relighter = std::make_shared<bridge::BridgeRelighter>(bridge_client());
    } else {
        throw Error(ErrorCode::BadConfig, "unknown relighter plugin \"" + cfg.relighter + "\"");
    }

    if (cfg.normals == "analytic") {
        set.normals = std::make_shared<plugins::AnalyticNormalSource>(scene_frames("normals"));
    } else if (cfg.normals == "identity") {
        set.normals = std::make_shared<plugins::IdentityNormalSource>();
    } else if (cfg.normals == "bridge") {
        set.normals = std::make_shared<bridge::BridgeNormalSource>(bridge_client());
    } else {
        throw Error(ErrorCode::BadConfig, "unknown normals plugin \"" + cfg.normals + "\"");
    }
    return set;
}

RunResult run(const PipelineConfig& cfg, const Tensor4& source_video,
              const traj::TrajectorySpec& trajectory, const std::string& prompt,
              PluginSet& plugin_set) {
    validate(cfg);
    if (source_video.channels() != 3) {
        throw Error(ErrorCode::ShapeMismatch, "source video must have 3 channels");
    }
    if (source_video.height() % cfg.latent_scale != 0 ||
        source_video.width() % cfg.latent_scale != 0) {
        throw Error(ErrorCode::ShapeMismatch, "video dims must divide by latent_scale");
    }
    if (trajectory.frame_count != source_video.frames()) {
        throw Error(ErrorCode::ShapeMismatch, "trajectory frame_count must match the video");
    }

    RunResult result;
    RunDiagnostics& diag = result.diagnostics;
    diag.hash_source = hash_tensor(source_video);

    result.maps = traj::generate(trajectory, source_video.height(), source_video.width(),
                                 cfg.mask_threshold, cfg.latent_scale, cfg.falloff);
    diag.hash_maps = hash_tensor(result.maps.maps);
    diag.hash_masks_pixel = hash_tensor(result.maps.masks_pixel);
    diag.hash_masks_latent = hash_tensor(result.maps.masks_latent);

    auto& codec = *plugin_set.codec;
    auto& denoiser = *plugin_set.denoiser;
    auto& relighter = *plugin_set.relighter;

    Tensor4 z0 = guarded("codec encode", -1, [&] { return codec.encode(source_video); });
    if (z0.frames() != source_video.frames() ||
        z0.height() != source_video.height() / cfg.latent_scale ||
        z0.width() != source_video.width() / cfg.latent_scale) {
        throw Error(ErrorCode::ShapeContract, "codec encode violated the latent shape contract");
    }
    diag.hash_z0 = hash_tensor(z0);

    const double gamma_full = signal_at_depth(cfg.t_m, cfg.t_m, cfg.gamma_end);
    Tensor4 z_noised = add_noise(z0, gamma_full,
                                 noise::kStreamForwardBase + static_cast<uint64_t>(cfg.t_m),
                                 cfg.seed, cfg.jobs);
    diag.hash_noised = hash_tensor(z_noised);

    const inject::InjectionConfig inj_cfg{cfg.omega, cfg.seed, cfg.renormalize_variance};
    Tensor4 z_cur = cfg.injection_mode == InjectionMode::Latent
                        ? inject::inject(z_noised, result.maps.masks_latent, inj_cfg, cfg.jobs)
                        : inject::inject_frequency_mode(z_noised, result.maps.masks_latent, inj_cfg,
                                                        cfg.jobs);
    diag.hash_injected = hash_tensor(z_cur);

    Tensor4 normals_video =
        guarded("normal source", -1, [&] { return plugin_set.normals->normals(source_video); });
    if (!normals_video.same_shape(source_video)) {
        throw Error(ErrorCode::ShapeContract, "normal source violated the video shape contract");
    }
    diag.hash_normals = hash_tensor(normals_video);
    const Tensor4 z_normal = guarded("codec encode", -1, [&] { return codec.encode(normals_video); });

    Tensor4 residual;
    Tensor4 z_bar = z_cur;
    const freq::ButterworthSpec base_filter{cfg.butterworth_order, 1.0, 1.0};

    for (int s = 0; s < cfg.t_m; ++s) {
        const auto started = std::chrono::steady_clock::now();
        StepDiagnostics step;
        step.step = s;
        step.lambda = 1.0 - static_cast<double>(s) / static_cast<double>(cfg.t_m);
        step.alpha = freq::dynamic_cutoff(s, cfg.t_m, cfg.alpha_min);

        Tensor4 prediction =
            guarded("denoiser", s, [&] { return denoiser.predict_z0(z_cur, s, result.maps, prompt); });
        try {
            prediction.check_finite("denoiser prediction");
        } catch (const Error& e) {
            throw Error(ErrorCode::NumericFailure,
                        std::string(e.what()) + " at step " + std::to_string(s));
        }
        step.hash_prediction = hash_tensor(prediction);

        Tensor4 consistency =
            clamp01(guarded("codec decode", s, [&] { return codec.decode(prediction); }));
        if (!consistency.same_shape(source_video)) {
            throw Error(ErrorCode::ShapeContract, "codec decode violated the video shape contract");
        }
        step.hash_consistency = hash_tensor(consistency);

        if (s == 0 && cfg.residual_mode == ResidualMode::Residual) {
            residual = compute_residual(source_video, consistency);
            diag.hash_residual = hash_tensor(residual);
        }

        Tensor4 relight_base = cfg.residual_mode == ResidualMode::Residual
                                   ? add_tensors(consistency, residual)
                                   : source_video;

        Tensor4 relight_input;
        if (cfg.geometry_fusion) {
            freq::ButterworthSpec spec = base_filter;
            spec.d_s = step.alpha;
            spec.d_t = step.alpha;
            const Tensor4 z_detail =
                guarded("codec encode", s, [&] { return codec.encode(relight_base); });
            auto fused = freq::fuse(z_normal, z_detail, spec);
            step.fuse_imag = fused.max_imag;
            relight_input =
                clamp01(guarded("codec decode", s, [&] { return codec.decode(fused.tensor); }));
        } else {
            relight_input = clamp01(relight_base);
        }
        step.hash_relight_input = hash_tensor(relight_input);

        Tensor4 relit = guarded("relighter", s, [&] {
            return relighter.relight_clip(relight_input, result.maps.maps, prompt, cfg.jobs);
        });
        if (!relit.same_shape(source_video)) {
            throw Error(ErrorCode::ShapeContract, "relighter violated the video shape contract");
        }
        step.hash_relit = hash_tensor(relit);

        const Tensor4 target =
            cfg.progressive_fusion ? progressive_fuse(consistency, relit, step.lambda) : relit;
        step.hash_fusion_target = hash_tensor(target);

        z_bar = guarded("codec encode", s, [&] { return codec.encode(target); });
        try {
            z_bar.check_finite("fused latents");
        } catch (const Error& e) {
            throw Error(ErrorCode::NumericFailure,
                        std::string(e.what()) + " at step " + std::to_string(s));
        }
        denoiser.observe_fused(z_bar, s);

        const int depth_next = cfg.t_m - (s + 1);
        step.gamma_next = signal_at_depth(depth_next, cfg.t_m, cfg.gamma_end);
        z_cur = add_noise(z_bar, step.gamma_next,
                          noise::kStreamForwardBase + static_cast<uint64_t>(depth_next), cfg.seed,
                          cfg.jobs);
        step.hash_latents = hash_tensor(z_cur);

        step.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                started)
                          .count();
        diag.steps.push_back(step);
    }

    result.video = clamp01(guarded("codec decode", cfg.t_m - 1, [&] { return codec.decode(z_bar); }));
    diag.hash_final = hash_tensor(result.video);
    return result;
}

namespace {

ResidualMode residual_mode_from(const std::string& s) {
    if (s == "residual") return ResidualMode::Residual;
    if (s == "raw_frames") return ResidualMode::RawFrames;
    throw Error(ErrorCode::BadConfig, "residual_mode must be \"residual\" or \"raw_frames\"");
}

InjectionMode injection_mode_from(const std::string& s) {
    if (s == "latent") return InjectionMode::Latent;
    if (s == "frequency") return InjectionMode::Frequency;
    throw Error(ErrorCode::BadConfig, "injection_mode must be \"latent\" or \"frequency\"");
}

}  // namespace

PipelineConfig parse_config_json(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::BadConfig, std::string("config JSON parse error: ") + e.what());
    }
    if (!root.is_object()) {
        throw Error(ErrorCode::BadConfig, "config must be a JSON object");
    }
    // A run manifest embeds the resolved config under "config"; accept both.
    if (root.contains("config") && root["config"].is_object()) {
        root = root["config"];
    }
    PipelineConfig cfg;
    try {
        cfg.t_m = root.value("t_m", cfg.t_m);
        cfg.omega = root.value("omega", cfg.omega);
        cfg.butterworth_order = root.value("butterworth_order", cfg.butterworth_order);
        cfg.alpha_min = root.value("alpha_min", cfg.alpha_min);
        cfg.mask_threshold = root.value("mask_threshold", cfg.mask_threshold);
        cfg.latent_scale = root.value("latent_scale", cfg.latent_scale);
        cfg.gamma_end = root.value("gamma_end", cfg.gamma_end);
        cfg.seed = root.value("seed", cfg.seed);
        cfg.jobs = root.value("jobs", cfg.jobs);
        cfg.progressive_fusion = root.value("progressive_fusion", cfg.progressive_fusion);
        cfg.geometry_fusion = root.value("geometry_fusion", cfg.geometry_fusion);
        if (root.contains("residual_mode")) {
            cfg.residual_mode = residual_mode_from(root["residual_mode"].get<std::string>());
        }
        if (root.contains("injection_mode")) {
            cfg.injection_mode = injection_mode_from(root["injection_mode"].get<std::string>());
        }
        cfg.renormalize_variance = root.value("renormalize_variance", cfg.renormalize_variance);
        if (root.contains("falloff")) {
            const auto f = root["falloff"].get<std::string>();
            if (f == "linear") {
                cfg.falloff = traj::Falloff::Linear;
            } else if (f == "gaussian") {
                cfg.falloff = traj::Falloff::Gaussian;
            } else {
                throw Error(ErrorCode::BadConfig, "falloff must be \"linear\" or \"gaussian\"");
            }
        }
        const json plugins_obj = root.value("plugins", json::object());
        cfg.codec = plugins_obj.value("codec", cfg.codec);
        cfg.denoiser = plugins_obj.value("denoiser", cfg.denoiser);
        cfg.relighter = plugins_obj.value("relighter", cfg.relighter);
        cfg.normals = plugins_obj.value("normals", cfg.normals);
        cfg.scene_dir = root.value("scene_dir", cfg.scene_dir);
        cfg.relight_ambient = root.value("relight_ambient", cfg.relight_ambient);
        cfg.relight_gain = root.value("relight_gain", cfg.relight_gain);
        const json bridge_obj = root.value("bridge", json::object());
        cfg.bridge_command = bridge_obj.value("command", cfg.bridge_command);
        cfg.bridge_workdir = bridge_obj.value("workdir", cfg.bridge_workdir);
        cfg.bridge_deadline_s = bridge_obj.value("deadline_s", cfg.bridge_deadline_s);
        cfg.bridge_keep_artifacts = bridge_obj.value("keep_artifacts", cfg.bridge_keep_artifacts);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadConfig, std::string("config field error: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

std::string config_to_json(const PipelineConfig& cfg) {
    json j;
    j["t_m"] = cfg.t_m;
    j["omega"] = cfg.omega;
    j["butterworth_order"] = cfg.butterworth_order;
    j["alpha_min"] = cfg.alpha_min;
    j["mask_threshold"] = cfg.mask_threshold;
    j["latent_scale"] = cfg.latent_scale;
    j["gamma_end"] = cfg.gamma_end;
    j["seed"] = cfg.seed;
    j["jobs"] = cfg.jobs;
    j["progressive_fusion"] = cfg.progressive_fusion;
    j["geometry_fusion"] = cfg.geometry_fusion;
    j["residual_mode"] = cfg.residual_mode == ResidualMode::Residual ? "residual" : "raw_frames";
    j["injection_mode"] = cfg.injection_mode == InjectionMode::Latent ? "latent" : "frequency";
    j["renormalize_variance"] = cfg.renormalize_variance;
    j["falloff"] = cfg.falloff == traj::Falloff::Linear ? "linear" : "gaussian";
    j["plugins"] = {{"codec", cfg.codec},
                    {"denoiser", cfg.denoiser},
                    {"relighter", cfg.relighter},
                    {"normals", cfg.normals}};
    j["scene_dir"] = cfg.scene_dir;
    j["relight_ambient"] = cfg.relight_ambient;
    j["relight_gain"] = cfg.relight_gain;
    j["bridge"] = {{"command", cfg.bridge_command},
                   {"workdir", cfg.bridge_workdir},
                   {"deadline_s", cfg.bridge_deadline_s},
                   {"keep_artifacts", cfg.bridge_keep_artifacts}};
    return j.dump(2);
}

}  // namespace lightkit::pipeline
