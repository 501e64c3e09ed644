// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lightkit/plugins.hpp"
#include "lightkit/tensor.hpp"
#include "lightkit/trajectory.hpp"

namespace lightkit::pipeline {

enum class ResidualMode { Residual, RawFrames };
enum class InjectionMode { Latent, Frequency };

struct PipelineConfig {
    int t_m = 25;                  // denoising step count
    double omega = 0.8;            // injection noise weight
    int butterworth_order = 4;
    double alpha_min = 0.05;
    double mask_threshold = 0.3;
    int latent_scale = 4;
    double gamma_end = 0.25;       // signal retention at full noising depth
    uint64_t seed = 0;
    int jobs = 1;

    bool progressive_fusion = true;
    bool geometry_fusion = true;
    ResidualMode residual_mode = ResidualMode::Residual;
    InjectionMode injection_mode = InjectionMode::Latent;
    bool renormalize_variance = false;
    traj::Falloff falloff = traj::Falloff::Linear;

    // plugin selection
    std::string codec = "identity";
    std::string denoiser = "oracle";
    std::string relighter = "lambertian";
    std::string normals = "analytic";
    std::string scene_dir;  // albedo/normal frames for the analytic plugins

    double relight_ambient = 0.30;
    double relight_gain = 2.0;

    // bridge backend (used when a plugin id is "bridge")
    std::string bridge_command;
    std::string bridge_workdir;
    double bridge_deadline_s = 120.0;
    bool bridge_keep_artifacts = false;
};

void validate(const PipelineConfig& cfg);

PipelineConfig parse_config_json(const std::string& json_text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const PipelineConfig& cfg);

/// Signal retention at noising depth d: linear from 1 at depth 0 down to
/// gamma_end at full depth.
double signal_at_depth(int depth, int total_steps, double gamma_end);

/// Forward noising z = sqrt(gamma) z0 + sqrt(1-gamma) eps with position-keyed
/// noise; `noise_stream` must be unique per noising event of a run.
Tensor4 add_noise(const Tensor4& z0, double gamma, uint64_t noise_stream, uint64_t seed,
                  int jobs = 1);

/// One-time pixel detail residual, source minus first-step decode.
Tensor4 compute_residual(const Tensor4& source_video, const Tensor4& first_decode);

/// Progressive fusion target (1 - lambda) consistency + lambda relit.
Tensor4 progressive_fuse(const Tensor4& consistency, const Tensor4& relit, double lambda);

struct StepDiagnostics {
    int step = 0;
    double lambda = 0.0;
    double alpha = 0.0;
    double gamma_next = 0.0;
    double fuse_imag = 0.0;  // imaginary residue of the geometry fusion
    uint64_t hash_prediction = 0;
    uint64_t hash_consistency = 0;
    uint64_t hash_relight_input = 0;
    uint64_t hash_relit = 0;
    uint64_t hash_fusion_target = 0;
    uint64_t hash_latents = 0;
    double millis = 0.0;
};

struct RunDiagnostics {
    uint64_t hash_source = 0;
    uint64_t hash_z0 = 0;
    uint64_t hash_noised = 0;
    uint64_t hash_injected = 0;
    uint64_t hash_maps = 0;
    uint64_t hash_masks_pixel = 0;
    uint64_t hash_masks_latent = 0;
    uint64_t hash_normals = 0;
    uint64_t hash_residual = 0;
    uint64_t hash_final = 0;
    std::vector<StepDiagnostics> steps;

    /// JSON-lines: one run record followed by one record per step.
    std::string to_jsonl() const;
};

struct PluginSet {
    std::shared_ptr<plugins::Codec> codec;
    std::shared_ptr<plugins::Denoiser> denoiser;
    std::shared_ptr<plugins::Relighter> relighter;
    std::shared_ptr<plugins::NormalSource> normals;
};

/// Instantiates the configured plugin ids ("identity", "oracle", "lambertian",
/// "analytic", "bridge", ...). Analytic plugins load their frames from
/// cfg.scene_dir; the source video is the albedo fallback when no scene
/// directory is given.
PluginSet make_plugins(const PipelineConfig& cfg, const Tensor4& source_video);

struct RunResult {
    Tensor4 video;                 // final relighted clip, clamped to [0,1]
    traj::LightMapSequence maps;   // maps and masks used by the run
    RunDiagnostics diagnostics;
};

/// Full controllable relighting loop: encode, noise, inject trajectory noise,
/// then per step predict / decode / restore detail / geometry-fuse / relight /
/// progressively fuse / re-encode / re-noise.
RunResult run(const PipelineConfig& cfg, const Tensor4& source_video,
              const traj::TrajectorySpec& trajectory, const std::string& prompt,
              PluginSet& plugin_set);

}  // namespace lightkit::pipeline
