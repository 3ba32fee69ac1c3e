#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gsw/camera.hpp"
#include "gsw/mpm.hpp"
#include "gsw/presets.hpp"

namespace gsw {

// Orbit camera generation when no camera file is given. Center and radius
// default to the scene bounds (center, 1.5x the max extent).
struct OrbitSpec {
    int count = 3;
    double elevation_deg = 15.0;
    double radius_scale = 1.5;
    double fov_x_deg = 60.0;
    int width = 640, height = 480;
    std::optional<Eigen::Vector3d> center;
    std::optional<double> radius;
};

// One run = one scene + one effect + one seed. Loaded from a versioned JSON
// document; relative input paths resolve against the config file location.
struct RunConfig {
    std::string scene_path;
    std::string mesh_path;
    std::string camera_path;  // empty: use the orbit spec
    OrbitSpec orbit;
    EffectName effect = EffectName::Snowfall;
    int frames = 250;
    uint64_t seed = 0;
    std::string output_dir = "out";
    nlohmann::json overrides = nlohmann::json::object();
    bool collision_handling = true;
    bool strict_rotation = false;
    int threads = 1;
    std::optional<KeyframeTrack> keyframes;  // world units; rigid_object only
};

// Parses and validates a run config. Throws gsw::Error naming the offending
// key; referenced input files must exist.
RunConfig load_run_config(const std::string& path);

struct SimulateSummary {
    int frames = 0;
    uint64_t emitted = 0;
    uint64_t collided = 0;  // deactivated by the small-motion rule
    uint64_t exited = 0;    // deactivated by leaving the domain
    uint64_t peak_active = 0;
    double wall_seconds = 0.0;
};

// Full simulation pass: normalize, seed stationary particles, then per
// frame emit -> step -> activity update -> collision resolution -> persist.
// Writes frames/<frame>.state files plus a run.json manifest under
// config.output_dir.
SimulateSummary run_simulate(const RunConfig& config);

struct RenderSummary {
    int frames_rendered = 0;
    int images_written = 0;
    double wall_seconds = 0.0;
};

// Renders frames [frame_begin, frame_end] (inclusive; -1 = full run range)
// for every camera: static scene with view-dependent color and wetness
// darkening, merged with the persisted dynamic and accumulated splats.
// Missing frame states abort with the full list of missing indices.
RenderSummary run_render(const RunConfig& config, int frame_begin = -1, int frame_end = -1);

// Human-readable preset table (all presets, all fields, override keys).
std::string list_presets();

struct AblationResult {
    double mean_distance_on = 0.0;   // accumulated-splat distance to mesh, sim units
    double mean_distance_off = 0.0;
    uint64_t count_on = 0;
    uint64_t count_off = 0;
};

// Runs the configured effect twice (collision handling on, then off) into
// subdirectories of the output dir and measures where collided splats came
// to rest relative to the mesh.
AblationResult run_ablation(const RunConfig& config);

// Mean distance-to-mesh (sim units) of the accumulated splats in the final
// frame state of a completed run directory.
std::pair<double, uint64_t> measure_rest_distance(const std::string& output_dir);

// Self-contained demo bundle: synthetic splat scene, matching collision
// mesh, cameras, and a ready-to-run config. With `with_box` a block sits on
// the ground; otherwise the ground is bare.
void write_sample_bundle(const std::string& dir, bool with_box = true);

// Layout helpers shared by the CLI and the tests.
std::string frame_state_path(const std::string& output_dir, int frame);
std::string run_manifest_path(const std::string& output_dir);

}  // namespace gsw
