#include "gsw/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>
#include <utility>

#include "gsw/collision.hpp"
#include "gsw/error.hpp"
#include "gsw/frame_state.hpp"
#include "gsw/mesh.hpp"
#include "gsw/png_io.hpp"
#include "gsw/renderer.hpp"
#include "gsw/rng.hpp"
#include "gsw/scene_io.hpp"

namespace gsw {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), what, " '", path, "': cannot open file");
    json doc = json::parse(in, nullptr, false);
    require(!doc.is_discarded(), what, " '", path, "': invalid JSON");
    return doc;
}

void write_json_file(const json& doc, const std::string& path, const char* what) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), what, " '", path, "': cannot open for writing");
    out << doc.dump(2) << '\n';
    require(out.good(), what, " '", path, "': write failed");
}

Eigen::Vector3d as_vec3(const json& j, const std::string& key) {
    require(j.is_array() && j.size() == 3, "config key '", key, "': expected [x, y, z]");
    Eigen::Vector3d v;
    for (int a = 0; a < 3; ++a) {
        require(j[a].is_number(), "config key '", key, "': expected numbers");
        v[a] = j[a].get<double>();
    }
    return v;
}

std::string resolve_input(const fs::path& base, const std::string& rel, const std::string& key) {
    fs::path p(rel);
    if (p.is_relative()) p = base / p;
    require(fs::exists(p), "config key '", key, "': file not found: ", p.string());
    return p.string();
}

void parse_orbit(const json& j, OrbitSpec& orbit) {
    for (const auto& [key, value] : j.items()) {
        if (key == "count") {
            orbit.count = value.get<int>();
        } else if (key == "elevation_deg") {
            orbit.elevation_deg = value.get<double>();
        } else if (key == "radius_scale") {
            orbit.radius_scale = value.get<double>();
        } else if (key == "fov_x_deg") {
            orbit.fov_x_deg = value.get<double>();
        } else if (key == "width") {
            orbit.width = value.get<int>();
        } else if (key == "height") {
            orbit.height = value.get<int>();
        } else if (key == "center") {
            orbit.center = as_vec3(value, "camera.center");
        } else if (key == "radius") {
            orbit.radius = value.get<double>();
        } else {
            fail("config key 'camera': unknown orbit field '", key, "'");
        }
    }
    require(orbit.count >= 1, "config key 'camera.count': need at least 1 camera");
    require(orbit.width > 0 && orbit.height > 0, "config key 'camera': bad image size");
}

KeyframeTrack parse_keyframes(const json& j) {
    require(j.is_array() && j.size() >= 2, "config key 'keyframes': expected >= 2 entries");
    KeyframeTrack track;
    for (const auto& entry : j) {
        require(entry.is_object() && entry.contains("frame") && entry.contains("position"),
                "config key 'keyframes': entries need 'frame' and 'position'");
        track.keys.emplace_back(entry["frame"].get<double>(),
                                as_vec3(entry["position"], "keyframes.position"));
    }
    return track;
}

// Sim-space image of an axis-aligned world box (the transform preserves
// axes and order, so mapping the corners suffices).
Aabb to_sim(const Aabb& world, const SimTransform& t) {
    return Aabb(t.to_sim(world.lo), t.to_sim(world.hi));
}

// Emitter regions default to generic unit-cube spans; unless the user
// pinned the region, refit the free axes to the scene's actual footprint so
// weather falls on the scene rather than on empty corners of the domain.
void fit_emitter_region(EffectPreset& fx, const Aabb& sim_bounds) {
    Aabb& r = fx.emitter.region;
    auto span = [&](int axis, double inset) {
        r.lo[axis] = std::clamp(sim_bounds.lo[axis], inset, 1.0 - inset);
        r.hi[axis] = std::clamp(sim_bounds.hi[axis], inset, 1.0 - inset);
    };
    switch (fx.name) {
        case EffectName::Snowfall:
        case EffectName::Rainfall:
        case EffectName::Leaves:
        case EffectName::Feather:
            span(0, 0.02);
            span(2, 0.02);
            break;
        case EffectName::Sandstorm:
            span(2, 0.02);  // inflow face keeps its x plane and y band
            break;
        case EffectName::Fog:
            span(0, 0.05);
            span(2, 0.05);
            r.lo[1] = std::clamp(sim_bounds.lo[1], 0.05, 0.95);
            // Headroom above the scene; a flat scene still gets a fog layer.
            r.hi[1] = std::clamp(std::max(sim_bounds.hi[1], r.lo[1] + 0.2), r.lo[1], 0.95);
            break;
        case EffectName::RigidObject:
            break;  // point emitter, driven by keyframes
    }
}

uint64_t count_active_dynamic(const SimState& state) {
    uint64_t n = 0;
    for (const Particle& p : state.particles)
        if (p.active && p.material != Material::Stationary) ++n;
    return n;
}

// The splat a collided particle freezes into when no surface projection
// runs (collision handling off, or CollisionMode::None): the live preset
// appearance at the recorded event pose. Asset-carrying presets freeze the
// whole aligned asset so a landed object keeps its shape.
void freeze_raw(const CollisionEvent& ev, const EffectPreset& fx, const AssetGaussians* asset,
                uint64_t seed, std::vector<AccumulatedSplat>& out) {
    if (asset && fx.asset) {
        for (GaussianSplat& s : align_asset(*asset, ev.position, ev.rotation, fx.asset->scale))
            out.push_back({std::move(s), ev.frame, ev.particle_id});
        return;
    }
    GaussianSplat s;
    s.position = ev.position;
    s.rotation = ev.rotation;
    s.opacity = fx.render_opacity;
    s.rgb = fx.render_color;
    if (fx.scale_max > 0.0) {
        Rng rng(stream_key(seed, rng_salt::kSandScale, ev.particle_id));
        s.scale = Eigen::Vector3d::Constant(rng.uniform(fx.scale_min, fx.scale_max));
    } else {
        s.scale = fx.render_scale;
    }
    out.push_back({std::move(s), ev.frame, ev.particle_id});
}

std::vector<AccumulatedSplat> accumulated_to_world(const std::vector<AccumulatedSplat>& sim,
                                                   const SimTransform& t) {
    std::vector<AccumulatedSplat> world = sim;
    for (AccumulatedSplat& a : world) {
        a.splat.position = t.to_world(a.splat.position);
        a.splat.scale /= t.scale;
    }
    return world;
}

SimTransform transform_from_manifest(const json& manifest) {
    require(manifest.contains("transform"), "run manifest: missing 'transform'");
    const json& t = manifest["transform"];
    SimTransform out;
    out.scale = t.at("scale").get<double>();
    out.translation = as_vec3(t.at("translation"), "transform.translation");
    return out;
}

std::vector<CameraSpec> resolve_cameras(const RunConfig& config, const Aabb& world_bounds) {
    if (!config.camera_path.empty()) return load_cameras(config.camera_path);
    const OrbitSpec& o = config.orbit;
    Eigen::Vector3d center = o.center ? *o.center : world_bounds.center();
    double radius = o.radius ? *o.radius : o.radius_scale * world_bounds.extent().maxCoeff();
    require(radius > 0.0, "orbit cameras: radius must be positive (degenerate scene bounds?)");
    return orbit_cameras(center, radius, o.elevation_deg, o.count, o.width, o.height, o.fov_x_deg);
}

}  // namespace

std::string frame_state_path(const std::string& output_dir, int frame) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%05d.state", frame);
    return (fs::path(output_dir) / "frames" / name).string();
}

std::string run_manifest_path(const std::string& output_dir) {
    return (fs::path(output_dir) / "run.json").string();
}

RunConfig load_run_config(const std::string& path) {
    json doc = read_json_file(path, "run config");
    require(doc.is_object(), "run config '", path, "': expected a JSON object");
    fs::path base = fs::path(path).parent_path();

    RunConfig cfg;
    std::string scene_rel, mesh_rel, camera_rel;
    bool has_version = false, has_scene = false, has_mesh = false, has_effect = false;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "version") {
                require(value.is_number_integer() && value.get<int>() == 1,
                        "config key 'version': expected 1");
                has_version = true;
            } else if (key == "scene") {
                scene_rel = value.get<std::string>();
                has_scene = true;
            } else if (key == "mesh") {
                mesh_rel = value.get<std::string>();
                has_mesh = true;
            } else if (key == "camera") {
                if (value.is_string()) {
                    camera_rel = value.get<std::string>();
                } else if (value.is_object()) {
                    parse_orbit(value, cfg.orbit);
                } else {
                    fail("config key 'camera': expected a file path or an orbit object");
                }
            } else if (key == "effect") {
                cfg.effect = effect_from_string(value.get<std::string>());
                has_effect = true;
            } else if (key == "frames") {
                cfg.frames = value.get<int>();
            } else if (key == "seed") {
                require(value.is_number_unsigned(), "config key 'seed': expected an unsigned integer");
                cfg.seed = value.get<uint64_t>();
            } else if (key == "output") {
                cfg.output_dir = value.get<std::string>();
            } else if (key == "overrides") {
                require(value.is_object(), "config key 'overrides': expected an object");
                cfg.overrides = value;
            } else if (key == "collision_handling") {
                cfg.collision_handling = value.get<bool>();
            } else if (key == "strict_rotation") {
                cfg.strict_rotation = value.get<bool>();
            } else if (key == "threads") {
                cfg.threads = value.get<int>();
            } else if (key == "keyframes") {
                cfg.keyframes = parse_keyframes(value);
            } else {
                fail("config key '", key, "': unknown key");
            }
        }
    } catch (const json::exception& e) {
        fail("run config '", path, "': ", e.what());
    }

    require(has_version, "run config '", path, "': missing 'version'");
    require(has_scene, "run config '", path, "': missing 'scene'");
    require(has_mesh, "run config '", path, "': missing 'mesh'");
    require(has_effect, "run config '", path, "': missing 'effect'");
    require(cfg.frames >= 1, "config key 'frames': need at least 1");
    require(!cfg.output_dir.empty(), "config key 'output': must not be empty");
    if (cfg.keyframes)
        require(cfg.effect == EffectName::RigidObject,
                "config key 'keyframes': only valid for effect rigid_object");
    if (cfg.effect == EffectName::RigidObject)
        require(cfg.keyframes.has_value(), "effect rigid_object needs a 'keyframes' track");

    cfg.scene_path = resolve_input(base, scene_rel, "scene");
    cfg.mesh_path = resolve_input(base, mesh_rel, "mesh");
    if (!camera_rel.empty()) cfg.camera_path = resolve_input(base, camera_rel, "camera");
    return cfg;
}

SimulateSummary run_simulate(const RunConfig& config) {
    Stopwatch watch;
    GaussianScene scene = load_gaussian_ply(config.scene_path);
    TriangleMesh mesh = load_mesh(config.mesh_path);

    Aabb world_bounds = scene.bounds;
    world_bounds.expand(mesh.bounds());
    SimTransform transform = compute_normalization(world_bounds);

    TriangleMesh mesh_sim = mesh;
    mesh_sim.apply(transform);
    Bvh bvh(mesh_sim);

    EffectPreset fx = preset(config.effect);
    std::vector<OverrideRecord> records = apply_overrides(fx, config.overrides);
    bool region_pinned = config.overrides.contains("emitter.region_min") ||
                         config.overrides.contains("emitter.region_max");
    if (!region_pinned) {
        fit_emitter_region(fx, to_sim(world_bounds, transform));
        validate_preset(fx);
    }

    std::optional<AssetGaussians> asset;
    if (fx.asset && !fx.asset->path.empty())
        asset = load_asset(fx.asset->path, fx.asset->gs_activations);

    SimConfig sim;
    sim.gravity = fx.gravity;
    sim.seed = config.seed;
    sim.threads = resolve_threads(config.threads);
    sim.strict_paper_rotation = config.strict_rotation;
    sim.total_frames = config.frames;

    SimState state;
    add_particles(state, sim, gaussians_to_stationary_particles(scene, transform));

    if (config.effect == EffectName::RigidObject) {
        KeyframeTrack track;
        for (const auto& [frame, pos] : config.keyframes->keys)
            track.keys.emplace_back(frame, transform.to_sim(pos));
        state.rigid_track = std::move(track);
        Particle rigid;
        std::tie(rigid.position, std::ignore) = keyframed_position(*state.rigid_track, 0.0);
        rigid.material = Material::Rigid;
        rigid.mu0 = lame_mu(fx.youngs_modulus, fx.poisson_ratio);
        rigid.lambda0 = lame_lambda(fx.youngs_modulus, fx.poisson_ratio);
        add_particles(state, sim, {rigid});
    }

    std::optional<WetnessGrid> wet;
    if (config.collision_handling && fx.collision_mode == CollisionMode::WetnessGrid)
        wet.emplace(mesh.bounds(), fx.wetness);

    fs::create_directories(fs::path(config.output_dir) / "frames");

    std::vector<AccumulatedSplat> accumulated;  // sim units, grows monotonically
    SimulateSummary sum;
    sum.frames = config.frames;
    for (int f = 0; f < config.frames; ++f) {
        if (wet && f > 0) decay_wetness(*wet, fx.wetness.decay);

        std::vector<Particle> batch = emit(fx.emitter, f, config.seed);
        sum.emitted += batch.size();
        add_particles(state, sim, std::move(batch));

        uint64_t active_before = count_active_dynamic(state);
        try {
            step(state, sim);
        } catch (const Error& e) {
            fail("simulate: frame ", f, ": ", e.what());
        }
        std::vector<CollisionEvent> events = update_active_flags(state, sim);
        uint64_t active_after = count_active_dynamic(state);
        sum.collided += events.size();
        sum.exited += (active_before - active_after) - events.size();
        sum.peak_active = std::max(sum.peak_active, active_after);

        for (const CollisionEvent& ev : events) {
            if (!config.collision_handling || fx.collision_mode == CollisionMode::None) {
                freeze_raw(ev, fx, asset ? &*asset : nullptr, config.seed, accumulated);
            } else if (fx.collision_mode == CollisionMode::SurfaceProject) {
                accumulated.push_back(project_snow(ev, bvh, fx));
            } else if (fx.collision_mode == CollisionMode::SandAccumulate) {
                accumulated.push_back(project_sand(ev, bvh, fx, config.seed));
            } else {  // WetnessGrid: darken, no splat
                splat_wetness(*wet, transform.to_world(ev.position));
            }
        }

        FrameState snap;
        snap.frame = f;
        snap.active_particles = active_after;
        snap.dynamic_splats = particles_to_gaussians(state.particles, fx, transform, config.seed,
                                                     config.strict_rotation,
                                                     asset ? &*asset : nullptr);
        snap.accumulated = accumulated_to_world(accumulated, transform);
        if (wet) snap.wetness = *wet;
        write_frame_state(snap, frame_state_path(config.output_dir, f));
    }

    json manifest = {
        {"version", 1},
        {"effect", effect_to_string(config.effect)},
        {"seed", config.seed},
        {"frames", config.frames},
        {"collision_handling", config.collision_handling},
        {"strict_rotation", config.strict_rotation},
        {"scene", config.scene_path},
        {"mesh", config.mesh_path},
        {"transform",
         {{"scale", transform.scale},
          {"translation",
           {transform.translation[0], transform.translation[1], transform.translation[2]}}}},
        {"totals",
         {{"emitted", sum.emitted},
          {"collided", sum.collided},
          {"exited", sum.exited},
          {"peak_active", sum.peak_active}}},
    };
    json echo = json::array();
    for (const OverrideRecord& r : records)
        echo.push_back({{"key", r.key}, {"before", r.before}, {"after", r.after}});
    manifest["overrides"] = echo;
    write_json_file(manifest, run_manifest_path(config.output_dir), "run manifest");

    sum.wall_seconds = watch.seconds();
    return sum;
}

RenderSummary run_render(const RunConfig& config, int frame_begin, int frame_end) {
    Stopwatch watch;
    GaussianScene scene = load_gaussian_ply(config.scene_path);
    TriangleMesh mesh = load_mesh(config.mesh_path);
    Aabb world_bounds = scene.bounds;
    world_bounds.expand(mesh.bounds());

    EffectPreset fx = preset(config.effect);
    apply_overrides(fx, config.overrides);

    std::vector<CameraSpec> cams = resolve_cameras(config, world_bounds);

    int first = frame_begin < 0 ? 0 : frame_begin;
    int last = frame_end < 0 ? config.frames - 1 : frame_end;
    require(first >= 0 && first <= last && last < config.frames, "render: frame range [", first,
            ", ", last, "] outside the run's 0..", config.frames - 1);

    std::string missing;
    int missing_count = 0;
    for (int f = first; f <= last; ++f) {
        if (!fs::exists(frame_state_path(config.output_dir, f))) {
            missing += (missing_count++ ? ", " : "") + std::to_string(f);
        }
    }
    require(missing_count == 0, "render: ", missing_count, " missing frame state(s) under ",
            config.output_dir, "/frames: ", missing, " (run simulate first)");

    // Static colors are view-dependent but frame-invariant: evaluate once
    // per camera, then only the wetness factor varies per frame.
    std::vector<std::vector<Eigen::Vector3d>> static_rgb(cams.size());
    for (size_t c = 0; c < cams.size(); ++c) {
        static_rgb[c].resize(scene.splats.size());
        Eigen::Vector3d eye = cams[c].position();
        for (size_t i = 0; i < scene.splats.size(); ++i) {
            if (scene.sh.empty()) {
                static_rgb[c][i] = scene.splats[i].rgb;
                continue;
            }
            Eigen::Vector3d dir = scene.splats[i].position - eye;
            double len = dir.norm();
            static_rgb[c][i] = len > 0.0
                                   ? evaluate_sh(scene.sh_degree, scene.sh_for(i), dir / len)
                                   : scene.splats[i].rgb;
        }
    }

    RenderOptions opts;
    opts.threads = resolve_threads(config.threads);
    fs::create_directories(fs::path(config.output_dir) / "renders");

    RenderSummary sum;
    std::vector<GaussianSplat> combined;
    for (int f = first; f <= last; ++f) {
        FrameState snap = read_frame_state(frame_state_path(config.output_dir, f));
        std::vector<double> factors;
        if (snap.wetness)
            factors = wetness_factors(scene, *snap.wetness, fx.wetness.darkening_gain);
        for (size_t c = 0; c < cams.size(); ++c) {
            combined.clear();
            combined.reserve(scene.splats.size() + snap.dynamic_splats.size() +
                             snap.accumulated.size());
            for (size_t i = 0; i < scene.splats.size(); ++i) {
                GaussianSplat s = scene.splats[i];
                s.rgb = factors.empty() ? static_rgb[c][i] : static_rgb[c][i] * factors[i];
                combined.push_back(std::move(s));
            }
            combined.insert(combined.end(), snap.dynamic_splats.begin(),
                            snap.dynamic_splats.end());
            for (const AccumulatedSplat& a : snap.accumulated) combined.push_back(a.splat);

            FrameImage img = render(combined, cams[c], opts);
            char name[96];
            std::snprintf(name, sizeof name, "frame_%05d_%s.png", f, cams[c].name.c_str());
            write_png(img, (fs::path(config.output_dir) / "renders" / name).string());
            ++sum.images_written;
        }
        ++sum.frames_rendered;
    }
    sum.wall_seconds = watch.seconds();
    return sum;
}

std::string list_presets() {
    std::ostringstream os;
    for (EffectName name :
         {EffectName::Snowfall, EffectName::Rainfall, EffectName::Fog, EffectName::Sandstorm,
          EffectName::Leaves, EffectName::Feather, EffectName::RigidObject}) {
        EffectPreset p = preset(name);
        os << "preset " << effect_to_string(name) << "\n";
        for (const OverrideEntry& entry : override_entries())
            os << "  " << std::left << std::setw(26) << entry.key << " " << entry.get(p) << "\n";
        os << "\n";
    }
    os << "Every field above is overridable via the config's \"overrides\" object,\n"
          "keyed exactly as printed. Lengths and positions are simulation units\n"
          "(unit-cube domain); see the README for the world mapping.\n";
    return os.str();
}

std::pair<double, uint64_t> measure_rest_distance(const std::string& output_dir) {
    json manifest = read_json_file(run_manifest_path(output_dir), "run manifest");
    SimTransform transform = transform_from_manifest(manifest);
    int frames = manifest.at("frames").get<int>();

    TriangleMesh mesh = load_mesh(manifest.at("mesh").get<std::string>());
    mesh.apply(transform);
    Bvh bvh(mesh);

    FrameState last = read_frame_state(frame_state_path(output_dir, frames - 1));
    if (last.accumulated.empty()) return {0.0, 0};
    double total = 0.0;
    for (const AccumulatedSplat& a : last.accumulated)
        total += bvh.closest_point(transform.to_sim(a.splat.position)).distance;
    return {total / static_cast<double>(last.accumulated.size()),
            static_cast<uint64_t>(last.accumulated.size())};
}

AblationResult run_ablation(const RunConfig& config) {
    RunConfig on = config;
    on.collision_handling = true;
    on.output_dir = (fs::path(config.output_dir) / "ch_on").string();
    RunConfig off = config;
    off.collision_handling = false;
    off.output_dir = (fs::path(config.output_dir) / "ch_off").string();

    run_simulate(on);
    run_simulate(off);

    AblationResult r;
    std::tie(r.mean_distance_on, r.count_on) = measure_rest_distance(on.output_dir);
    std::tie(r.mean_distance_off, r.count_off) = measure_rest_distance(off.output_dir);
    return r;
}

void write_sample_bundle(const std::string& dir, bool with_box) {
    fs::create_directories(dir);

    const double box_half = 0.25, box_top = 0.5;
    GaussianScene scene;
    auto add_splat = [&](const Eigen::Vector3d& pos, const Eigen::Vector3d& scale,
                         const Eigen::Vector3d& rgb) {
        GaussianSplat s;
        s.position = pos;
        s.scale = scale;
        s.opacity = 0.95;
        s.rgb = rgb;
        scene.splats.push_back(std::move(s));
    };

    // Checkered ground carpet over [-1, 1]^2.
    const int n = 40;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x = -1.0 + 2.0 * (i + 0.5) / n;
            double z = -1.0 + 2.0 * (j + 0.5) / n;
            bool dark = ((i / 5) + (j / 5)) % 2 != 0;
            add_splat({x, 0.0, z}, {0.05, 0.02, 0.05},
                      dark ? Eigen::Vector3d{0.23, 0.33, 0.19} : Eigen::Vector3d{0.42, 0.52, 0.33});
        }
    }
    if (with_box) {
        const Eigen::Vector3d brick{0.55, 0.31, 0.24};
        const int m = 8;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                double u = -box_half + 2.0 * box_half * (i + 0.5) / m;
                double v = -box_half + 2.0 * box_half * (j + 0.5) / m;
                double h = box_top * (j + 0.5) / m;
                add_splat({u, box_top, v}, {0.025, 0.012, 0.025}, brick);       // top
                add_splat({u, h, -box_half}, {0.025, 0.025, 0.012}, brick);     // front
                add_splat({u, h, box_half}, {0.025, 0.025, 0.012}, brick);      // back
                add_splat({-box_half, h, u}, {0.012, 0.025, 0.025}, brick);     // left
                add_splat({box_half, h, u}, {0.012, 0.025, 0.025}, brick);      // right
            }
        }
    }
    scene.recompute_bounds();
    save_gaussian_ply(scene, (fs::path(dir) / "scene.ply").string());

    std::ostringstream obj;
    obj << "# sample collision mesh: ground plane" << (with_box ? " + box" : "") << "\n";
    obj << "v -1 0 -1\nv -1 0 1\nv 1 0 1\nv 1 0 -1\n";
    obj << "f 1 3 4\nf 1 2 3\n";
    if (with_box) {
        double l = -box_half, h = box_half, t = box_top;
        const double vx[8][3] = {{l, 0, l}, {h, 0, l}, {h, 0, h}, {l, 0, h},
                                 {l, t, l}, {h, t, l}, {h, t, h}, {l, t, h}};
        for (const auto& v : vx) obj << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
        // 1-based on top of the 4 ground vertices. Outward winding.
        const int faces[12][3] = {{5, 7, 6}, {5, 8, 7},  // top (+y)
                                  {1, 2, 3}, {1, 3, 4},  // bottom (-y)
                                  {1, 5, 6}, {1, 6, 2},  // -z
                                  {4, 7, 8}, {4, 3, 7},  // +z
                                  {1, 4, 8}, {1, 8, 5},  // -x
                                  {2, 6, 7}, {2, 7, 3}};  // +x
        for (const auto& f : faces)
            obj << "f " << f[0] + 4 << " " << f[1] + 4 << " " << f[2] + 4 << "\n";
    }
    std::ofstream mesh_out((fs::path(dir) / "mesh.obj").string(), std::ios::binary);
    require(mesh_out.good(), "sample bundle: cannot write mesh.obj under ", dir);
    mesh_out << obj.str();
    mesh_out.close();
    require(mesh_out.good(), "sample bundle: writing mesh.obj failed");

    save_cameras((fs::path(dir) / "cameras.json").string(),
                 orbit_cameras({0.0, 0.25, 0.0}, 2.4, 20.0, 3, 640, 480, 60.0));

    json cfg = {
        {"version", 1},   {"scene", "scene.ply"},     {"mesh", "mesh.obj"},
        {"camera", "cameras.json"}, {"effect", "snowfall"}, {"frames", 60},
        {"seed", 7},      {"output", "out"},
    };
    write_json_file(cfg, (fs::path(dir) / "config.json").string(), "sample config");
}

}  // namespace gsw
