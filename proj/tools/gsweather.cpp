#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <utility>

#include "gsw/error.hpp"
#include "gsw/pipeline.hpp"

namespace {

struct RunFlags {
    std::string config_path;
    uint64_t seed = 0;
    std::string frames;
    std::string output;
    bool no_collision = false;
    bool strict_rotation = false;
    int threads = 0;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* frames_opt = nullptr;
    CLI::Option* output_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool frames_is_range) {
    cmd->add_option("--config", f.config_path, "run config JSON")->required();
    f.seed_opt = cmd->add_option("--seed", f.seed, "override the config seed");
    f.frames_opt = cmd->add_option("--frames", f.frames,
                                   frames_is_range ? "frame range a..b (default: the whole run)"
                                                   : "frame count (overrides the config)");
    f.output_opt = cmd->add_option("--output", f.output, "override the output directory");
    cmd->add_flag("--no-collision-handling", f.no_collision,
                  "freeze collided particles in place instead of projecting onto the mesh");
    cmd->add_flag("--strict-paper-rotation", f.strict_rotation,
                  "transposed rotation-extraction convention (see README)");
    f.threads_opt = cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

gsw::RunConfig config_with_flags(const RunFlags& f) {
    gsw::RunConfig cfg = gsw::load_run_config(f.config_path);
    if (f.seed_opt->count()) cfg.seed = f.seed;
    if (f.output_opt->count()) cfg.output_dir = f.output;
    if (f.threads_opt->count()) cfg.threads = f.threads;
    if (f.no_collision) cfg.collision_handling = false;
    if (f.strict_rotation) cfg.strict_rotation = true;
    return cfg;
}

struct FrameArg {
    int a = 0, b = 0;
    bool is_range = false;
};

FrameArg parse_frames_arg(const std::string& text) {
    FrameArg out;
    try {
        size_t dots = text.find("..");
        if (dots == std::string::npos) {
            out.a = out.b = std::stoi(text);
        } else {
            out.a = std::stoi(text.substr(0, dots));
            out.b = std::stoi(text.substr(dots + 2));
            out.is_range = true;
        }
    } catch (const std::exception&) {
        gsw::fail("--frames: expected N or a..b, got '", text, "'");
    }
    return out;
}

int run_simulate_cmd(const RunFlags& flags) {
    gsw::RunConfig cfg = config_with_flags(flags);
    if (flags.frames_opt->count()) {
        FrameArg fr = parse_frames_arg(flags.frames);
        if (fr.is_range) {
            gsw::require(fr.a == 0, "simulate --frames: ranges must start at 0 "
                                    "(simulation state is sequential), got ", flags.frames);
            cfg.frames = fr.b + 1;
        } else {
            cfg.frames = fr.a;
        }
        gsw::require(cfg.frames >= 1, "simulate --frames: need at least 1 frame");
    }
    gsw::SimulateSummary s = gsw::run_simulate(cfg);
    std::cout << "simulated " << s.frames << " frames: emitted=" << s.emitted
              << " collided=" << s.collided << " exited=" << s.exited
              << " peak_active=" << s.peak_active << " (" << s.wall_seconds << " s)\n"
              << "frame states under " << cfg.output_dir << "/frames, manifest "
              << gsw::run_manifest_path(cfg.output_dir) << "\n";
    return 0;
}

int run_render_cmd(const RunFlags& flags) {
    gsw::RunConfig cfg = config_with_flags(flags);
    int a = -1, b = -1;
    if (flags.frames_opt->count()) {
        FrameArg fr = parse_frames_arg(flags.frames);
        a = fr.a;
        b = fr.b;
    }
    gsw::RenderSummary s = gsw::run_render(cfg, a, b);
    std::cout << "rendered " << s.frames_rendered << " frame(s) -> " << s.images_written
              << " image(s) under " << cfg.output_dir << "/renders (" << s.wall_seconds
              << " s)\n";
    return 0;
}

int run_ablation_cmd(const RunFlags& flags) {
    gsw::RunConfig cfg = config_with_flags(flags);
    if (flags.frames_opt->count()) {
        FrameArg fr = parse_frames_arg(flags.frames);
        gsw::require(!fr.is_range || fr.a == 0,
                     "ablate-collisions --frames: ranges must start at 0");
        cfg.frames = fr.is_range ? fr.b + 1 : fr.a;
        gsw::require(cfg.frames >= 1, "ablate-collisions --frames: need at least 1 frame");
    }
    gsw::AblationResult r = gsw::run_ablation(cfg);
    std::cout << "collision handling on : mean rest distance " << r.mean_distance_on
              << " sim units over " << r.count_on << " accumulated splats\n"
              << "collision handling off: mean rest distance " << r.mean_distance_off
              << " sim units over " << r.count_off << " accumulated splats\n"
              << "difference (off - on): " << (r.mean_distance_off - r.mean_distance_on) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic weather and object effects for Gaussian-splat scenes"};
    app.require_subcommand(1);

    RunFlags sim_flags, render_flags, ablate_flags;
    CLI::App* sim = app.add_subcommand("simulate", "run the physics pass and persist frame states");
    add_run_flags(sim, sim_flags, false);
    CLI::App* ren = app.add_subcommand("render", "render persisted frame states to PNG");
    add_run_flags(ren, render_flags, true);
    CLI::App* pre =
        app.add_subcommand("presets", "print every effect preset and its override keys");
    CLI::App* abl = app.add_subcommand(
        "ablate-collisions", "run collision handling on vs off and compare rest distances");
    add_run_flags(abl, ablate_flags, false);

    std::string sample_dir = "sample";
    bool sample_flat = false;
    CLI::App* mk = app.add_subcommand(
        "make-sample", "write a self-contained demo bundle (scene, mesh, cameras, config)");
    mk->add_option("--dir", sample_dir, "target directory");
    mk->add_flag("--flat", sample_flat, "bare ground without the box obstacle");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate_cmd(sim_flags);
        if (ren->parsed()) return run_render_cmd(render_flags);
        if (abl->parsed()) return run_ablation_cmd(ablate_flags);
        if (pre->parsed()) {
            std::cout << gsw::list_presets();
            return 0;
        }
        if (mk->parsed()) {
            gsw::write_sample_bundle(sample_dir, !sample_flat);
            std::cout << "sample bundle in " << sample_dir
                      << ": scene.ply mesh.obj cameras.json config.json\n"
                      << "try: gsweather simulate --config " << sample_dir
                      << "/config.json && gsweather render --config " << sample_dir
                      << "/config.json\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
