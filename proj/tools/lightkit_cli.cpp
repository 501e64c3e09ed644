// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lightkit/bridge.hpp"
#include "lightkit/error.hpp"
#include "lightkit/freq_fusion.hpp"
#include "lightkit/hash.hpp"
#include "lightkit/injection.hpp"
#include "lightkit/metrics.hpp"
#include "lightkit/pipeline.hpp"
#include "lightkit/scene.hpp"
#include "lightkit/tensor_io.hpp"
#include "lightkit/trajectory.hpp"
#include "lightkit/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

uint64_t hash_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw lightkit::Error(lightkit::ErrorCode::IoFailure, "cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();
    return lightkit::fnv1a64(std::as_bytes(std::span<const char>(bytes)));
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

/// Light maps (F x 1 x H x W) as grayscale RGB previews.
void write_map_previews(const lightkit::Tensor4& maps, const fs::path& dir) {
    lightkit::Tensor4 rgb(maps.frames(), 3, maps.height(), maps.width());
    for (int64_t f = 0; f < maps.frames(); ++f) {
        for (int64_t y = 0; y < maps.height(); ++y) {
            for (int64_t x = 0; x < maps.width(); ++x) {
                for (int c = 0; c < 3; ++c) {
                    rgb.at(f, c, y, x) = maps.at(f, 0, y, x);
                }
            }
        }
    }
    lightkit::write_video_ppm(rgb, dir);
}

struct TrajgenArgs {
    std::string traj_path;
    std::vector<int64_t> size;
    std::string out_dir;
    double threshold = 0.3;
    int scale = 4;
    std::string falloff = "linear";
};

int cmd_trajgen(const TrajgenArgs& args) {
    const auto spec = lightkit::traj::load_spec(args.traj_path);
    const auto falloff = args.falloff == "gaussian" ? lightkit::traj::Falloff::Gaussian
                                                    : lightkit::traj::Falloff::Linear;
    const auto seq = lightkit::traj::generate(spec, args.size[0], args.size[1], args.threshold,
                                              args.scale, falloff);
    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    lightkit::save_tensor(seq.maps, out / "maps.lctk");
    lightkit::save_tensor(seq.masks_pixel, out / "masks_pixel.lctk");
    lightkit::save_tensor(seq.masks_latent, out / "masks_latent.lctk");
    write_map_previews(seq.maps, out / "preview");
    std::cout << "wrote " << spec.frame_count << " light maps to " << args.out_dir << "\n";
    return 0;
}

struct InjectArgs {
    std::string latents, masks, out;
    double omega = 0.8;
    uint64_t seed = 0;
    std::string mode = "latent";
    bool renormalize = false;
    int jobs = 1;
};

int cmd_inject(const InjectArgs& args) {
    const auto latents = lightkit::load_tensor(args.latents);
    const auto masks = lightkit::load_tensor(args.masks);
    const lightkit::inject::InjectionConfig cfg{args.omega, args.seed, args.renormalize};
    lightkit::Tensor4 result;
    if (args.mode == "frequency") {
        result = lightkit::inject::inject_frequency_mode(latents, masks, cfg, args.jobs);
    } else {
        result = lightkit::inject::inject(latents, masks, cfg, args.jobs);
    }
    lightkit::save_tensor(result, args.out);
    return 0;
}

struct FuseArgs {
    std::string normal, rgb, out;
    double alpha = 0.5;
    int order = 4;
};

int cmd_fuse(const FuseArgs& args) {
    const auto normal = lightkit::load_tensor(args.normal);
    const auto rgb = lightkit::load_tensor(args.rgb);
    const lightkit::freq::ButterworthSpec spec{args.order, args.alpha, args.alpha};
    const auto fused = lightkit::freq::fuse(normal, rgb, spec);
    lightkit::save_tensor(fused.tensor, args.out);
    std::cout << "max imaginary residue " << fused.max_imag << "\n";
    return 0;
}

struct RunArgs {
    std::string config_path, video_dir, traj_path, out_dir;
    std::string prompt;
    int jobs = -1;       // override when >= 0
    int64_t seed = -1;   // override when >= 0
};

int cmd_run(const RunArgs& args) {
    lightkit::pipeline::PipelineConfig cfg;
    if (!args.config_path.empty()) {
        cfg = lightkit::pipeline::load_config(args.config_path);
    }
    if (args.jobs >= 0) cfg.jobs = args.jobs;
    if (args.seed >= 0) cfg.seed = static_cast<uint64_t>(args.seed);

    const auto video = lightkit::read_video_ppm(args.video_dir);
    const auto trajectory = lightkit::traj::load_spec(args.traj_path);

    const fs::path out(args.out_dir);
    fs::create_directories(out);

    // The manifest precedes every output artifact; re-running with it as
    // --config reproduces the run bit-exactly.
    json manifest;
    manifest["tool"] = "lightkit";
    manifest["version"] = lightkit::kVersion;
    manifest["created"] = iso_now();
    manifest["seed"] = cfg.seed;
    manifest["prompt"] = args.prompt;
    manifest["config"] = json::parse(lightkit::pipeline::config_to_json(cfg));
    manifest["inputs"] = {{"video_hash", lightkit::hash_hex(lightkit::hash_tensor(video))},
                          {"trajectory_hash", lightkit::hash_hex(hash_file(args.traj_path))}};
    {
        std::ofstream mf(out / "manifest.json");
        mf << manifest.dump(2) << "\n";
    }

    auto plugins = lightkit::pipeline::make_plugins(cfg, video);
    const auto result = lightkit::pipeline::run(cfg, video, trajectory, args.prompt, plugins);

    lightkit::save_tensor(result.video, out / "final.lctk");
    lightkit::save_tensor(result.maps.maps, out / "maps.lctk");
    lightkit::save_tensor(result.maps.masks_pixel, out / "masks_pixel.lctk");
    lightkit::save_tensor(result.maps.masks_latent, out / "masks_latent.lctk");
    lightkit::write_video_ppm(result.video, out / "frames");
    {
        std::ofstream dg(out / "diagnostics.jsonl");
        dg << result.diagnostics.to_jsonl();
    }
    std::cout << "relighted " << result.video.frames() << " frames into " << args.out_dir << "\n";
    return 0;
}

struct MetricsArgs {
    std::string result_dir, source_dir, traj_path, report_path;
    double threshold = 0.3;
    double gain = 1.0;
    std::string luma = "bt601";
};

int cmd_metrics(const MetricsArgs& args) {
    const fs::path result_path(args.result_dir);
    const fs::path frames_sub = result_path / "frames";
    const auto result_video =
        lightkit::read_video_ppm(fs::is_directory(frames_sub) ? frames_sub : result_path);
    const auto source_video = lightkit::read_video_ppm(args.source_dir);
    const auto trajectory = lightkit::traj::load_spec(args.traj_path);
    const float* luma = args.luma == "bt709" ? lightkit::kLumaBt709 : lightkit::kLumaBt601;
    const auto report = lightkit::metrics::evaluate(result_video, source_video, trajectory,
                                                    args.threshold, args.gain, luma);
    std::ofstream rf(args.report_path);
    if (!rf) {
        throw lightkit::Error(lightkit::ErrorCode::IoFailure,
                              "cannot write report to " + args.report_path);
    }
    rf << report.to_json() << "\n";
    std::cout << "psnr_y " << report.psnr_y << " dB, psnr_light " << report.psnr_light
              << " dB, temporal " << report.temporal_consistency << " dB, track error "
              << report.centroid_track_error << "\n";
    return 0;
}

struct SynthArgs {
    std::string scene = "sphere";
    int64_t frames = 16;
    std::vector<int64_t> size;
    std::string bake = "none";
    std::string out_dir;
    double drift = 0.0;
};

int cmd_synth(const SynthArgs& args) {
    if (args.scene != "sphere") {
        throw lightkit::Error(lightkit::ErrorCode::BadConfig,
                              "unknown scene \"" + args.scene + "\"");
    }
    lightkit::scene::SceneParams params;
    params.frames = args.frames;
    params.height = args.size[0];
    params.width = args.size[1];
    params.drift = args.drift;
    if (args.bake == "left") {
        params.bake = lightkit::scene::BakeMode::Left;
    } else if (args.bake != "none") {
        throw lightkit::Error(lightkit::ErrorCode::BadConfig,
                              "--bake-light must be left or none");
    }
    const auto data = lightkit::scene::make_sphere_scene(params);
    lightkit::scene::write_scene(data, args.out_dir);
    std::cout << "wrote scene (" << args.frames << " frames, " << params.height << "x"
              << params.width << ") to " << args.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lightkit: trajectory-controlled video relighting toolkit"};
    app.set_version_flag("--version", lightkit::kVersion);
    app.require_subcommand(1);

    TrajgenArgs trajgen;
    auto* sc_trajgen = app.add_subcommand("trajgen", "Rasterize a light trajectory into maps/masks");
    sc_trajgen->add_option("--traj", trajgen.traj_path, "Trajectory JSON file")->required();
    sc_trajgen->add_option("--size", trajgen.size, "Frame height and width")
        ->expected(2)
        ->required();
    sc_trajgen->add_option("--out", trajgen.out_dir, "Output directory")->required();
    sc_trajgen->add_option("--threshold", trajgen.threshold, "Mask threshold in (0,1)");
    sc_trajgen->add_option("--scale", trajgen.scale, "Latent mask downscale factor");
    sc_trajgen->add_option("--falloff", trajgen.falloff, "Falloff profile: linear|gaussian");

    InjectArgs inj;
    auto* sc_inject = app.add_subcommand("inject", "Masked latent noise injection");
    sc_inject->add_option("--latents", inj.latents, "Input latents (LCTK)")->required();
    sc_inject->add_option("--masks", inj.masks, "Latent masks (LCTK)")->required();
    sc_inject->add_option("--omega", inj.omega, "Noise fusion weight in [0,1]");
    sc_inject->add_option("--seed", inj.seed, "Noise seed");
    sc_inject->add_option("--out", inj.out, "Output latents (LCTK)")->required();
    sc_inject->add_option("--mode", inj.mode, "Injection mode: latent|frequency");
    sc_inject->add_flag("--renormalize", inj.renormalize, "Rescale the blend to unit variance");
    sc_inject->add_option("--jobs", inj.jobs, "Worker threads (0 = hardware)");

    FuseArgs fuse_args;
    auto* sc_fuse = app.add_subcommand("fuse", "Frequency-domain low/high fusion of two tensors");
    sc_fuse->add_option("--normal", fuse_args.normal, "Low-frequency source (LCTK)")->required();
    sc_fuse->add_option("--rgb", fuse_args.rgb, "High-frequency source (LCTK)")->required();
    sc_fuse->add_option("--alpha", fuse_args.alpha, "Cut-off frequency in (0,1]");
    sc_fuse->add_option("--order", fuse_args.order, "Butterworth order");
    sc_fuse->add_option("--out", fuse_args.out, "Output tensor (LCTK)")->required();

    RunArgs run_args;
    auto* sc_run = app.add_subcommand("run", "Full controllable relighting pipeline");
    sc_run->add_option("--config", run_args.config_path, "Pipeline config or manifest JSON");
    sc_run->add_option("--video", run_args.video_dir, "Source frames directory (PPM)")->required();
    sc_run->add_option("--traj", run_args.traj_path, "Trajectory JSON file")->required();
    sc_run->add_option("--prompt", run_args.prompt, "Relighting prompt (forwarded to plugins)");
    sc_run->add_option("--out", run_args.out_dir, "Output directory")->required();
    sc_run->add_option("--jobs", run_args.jobs, "Worker threads override (0 = hardware)");
    sc_run->add_option("--seed", run_args.seed, "Seed override");

    MetricsArgs metrics_args;
    auto* sc_metrics = app.add_subcommand("metrics", "Controllability metrics for a run");
    sc_metrics->add_option("--result", metrics_args.result_dir, "Run output directory")->required();
    sc_metrics->add_option("--source", metrics_args.source_dir, "Source frames directory")
        ->required();
    sc_metrics->add_option("--traj", metrics_args.traj_path, "Trajectory JSON file")->required();
    sc_metrics->add_option("--report", metrics_args.report_path, "Report JSON path")->required();
    sc_metrics->add_option("--threshold", metrics_args.threshold, "Mask threshold in (0,1)");
    sc_metrics->add_option("--gain", metrics_args.gain, "Overlay gain for psnr_light");
    sc_metrics->add_option("--luma", metrics_args.luma, "Luma weights: bt601|bt709");

    SynthArgs synth;
    auto* sc_synth = app.add_subcommand("synth", "Generate the synthetic test scene");
    sc_synth->add_option("--scene", synth.scene, "Scene name (sphere)");
    sc_synth->add_option("--frames", synth.frames, "Frame count");
    sc_synth->add_option("--size", synth.size, "Frame height and width")->expected(2)->required();
    sc_synth->add_option("--bake-light", synth.bake, "Baked source lighting: left|none");
    sc_synth->add_option("--out", synth.out_dir, "Output directory")->required();
    sc_synth->add_option("--drift", synth.drift, "Horizontal sphere drift over the clip");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sc_trajgen->parsed()) return cmd_trajgen(trajgen);
        if (sc_inject->parsed()) return cmd_inject(inj);
        if (sc_fuse->parsed()) return cmd_fuse(fuse_args);
        if (sc_run->parsed()) return cmd_run(run_args);
        if (sc_metrics->parsed()) return cmd_metrics(metrics_args);
        if (sc_synth->parsed()) return cmd_synth(synth);
    } catch (const lightkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lightkit::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
