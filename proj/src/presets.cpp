#include "gsw/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gsw/error.hpp"
#include "gsw/rng.hpp"

namespace gsw {

namespace {

using nlohmann::json;

// Emission planes/faces sit just inside the domain walls; the pipeline
// narrows the horizontal span to the scene's actual extent.
constexpr double kTopPlaneY = 0.95;
constexpr double kFaceInset = 0.02;

void set_material(EffectPreset& p, Material m, double e, double nu) {
    p.material = m;
    p.youngs_modulus = e;
    p.poisson_ratio = nu;
    p.emitter.material = m;
    p.emitter.youngs_modulus = e;
    p.emitter.poisson_ratio = nu;
}

void top_plane_emitter(EffectPreset& p) {
    p.emitter.region = {{kFaceInset, kTopPlaneY, kFaceInset},
                        {1.0 - kFaceInset, kTopPlaneY, 1.0 - kFaceInset}};
}

// ---------------------------------------------------------------- override

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string fmt(const Eigen::Vector3d& v) {
    std::ostringstream os;
    os.precision(10);
    os << "(" << v[0] << ", " << v[1] << ", " << v[2] << ")";
    return os.str();
}

double as_num(const json& j) {
    if (!j.is_number()) fail("expected a number, got ", j.dump());
    return j.get<double>();
}

int as_int(const json& j) {
    if (!j.is_number_integer()) fail("expected an integer, got ", j.dump());
    return j.get<int>();
}

Eigen::Vector3d as_vec3(const json& j) {
    if (!j.is_array() || j.size() != 3) fail("expected an array of 3 numbers, got ", j.dump());
    Eigen::Vector3d v;
    for (int a = 0; a < 3; ++a) v[a] = as_num(j[a]);
    return v;
}

// Scalar preset scales expand to isotropic 3-vectors.
Eigen::Vector3d as_scale3(const json& j) {
    if (j.is_number()) return Eigen::Vector3d::Constant(j.get<double>());
    return as_vec3(j);
}

std::string as_str(const json& j) {
    if (!j.is_string()) fail("expected a string, got ", j.dump());
    return j.get<std::string>();
}

bool as_bool(const json& j) {
    if (!j.is_boolean()) fail("expected a boolean, got ", j.dump());
    return j.get<bool>();
}

Material material_from_string(const std::string& s) {
    if (s == "stationary") return Material::Stationary;
    if (s == "snow") return Material::Snow;
    if (s == "fluid") return Material::Fluid;
    if (s == "sand") return Material::Sand;
    if (s == "rigid") return Material::Rigid;
    fail("unknown material '", s, "' (stationary|snow|fluid|sand|rigid)");
}

CollisionMode collision_mode_from_string(const std::string& s) {
    if (s == "surface_project") return CollisionMode::SurfaceProject;
    if (s == "wetness_grid") return CollisionMode::WetnessGrid;
    if (s == "sand_accumulate") return CollisionMode::SandAccumulate;
    if (s == "none") return CollisionMode::None;
    fail("unknown collision mode '", s,
         "' (surface_project|wetness_grid|sand_accumulate|none)");
}

ClonePolicy& ensure_clone(EffectPreset& p) {
    if (!p.clone) p.clone.emplace();
    return *p.clone;
}

AssetRef& ensure_asset(EffectPreset& p) {
    if (!p.asset) p.asset.emplace();
    return *p.asset;
}

const OverrideEntry kOverrides[] = {
    {"youngs_modulus", [](const EffectPreset& p) { return fmt(p.youngs_modulus); },
     [](EffectPreset& p, const json& j) {
         p.youngs_modulus = p.emitter.youngs_modulus = as_num(j);
     }},
    {"poisson_ratio", [](const EffectPreset& p) { return fmt(p.poisson_ratio); },
     [](EffectPreset& p, const json& j) {
         p.poisson_ratio = p.emitter.poisson_ratio = as_num(j);
     }},
    {"material", [](const EffectPreset& p) { return std::string(material_name(p.material)); },
     [](EffectPreset& p, const json& j) {
         p.material = p.emitter.material = material_from_string(as_str(j));
     }},
    {"gravity", [](const EffectPreset& p) { return fmt(p.gravity); },
     [](EffectPreset& p, const json& j) { p.gravity = as_vec3(j); }},
    {"emitter.region_min", [](const EffectPreset& p) { return fmt(p.emitter.region.lo); },
     [](EffectPreset& p, const json& j) { p.emitter.region.lo = as_vec3(j); }},
    {"emitter.region_max", [](const EffectPreset& p) { return fmt(p.emitter.region.hi); },
     [](EffectPreset& p, const json& j) { p.emitter.region.hi = as_vec3(j); }},
    {"emitter.count", [](const EffectPreset& p) { return fmt(p.emitter.count); },
     [](EffectPreset& p, const json& j) { p.emitter.count = as_int(j); }},
    {"emitter.period", [](const EffectPreset& p) { return fmt(p.emitter.period); },
     [](EffectPreset& p, const json& j) { p.emitter.period = as_int(j); }},
    {"emitter.frame_budget", [](const EffectPreset& p) { return fmt(p.emitter.frame_budget); },
     [](EffectPreset& p, const json& j) { p.emitter.frame_budget = as_int(j); }},
    {"emitter.base_velocity", [](const EffectPreset& p) { return fmt(p.emitter.base_velocity); },
     [](EffectPreset& p, const json& j) { p.emitter.base_velocity = as_vec3(j); }},
    {"emitter.jitter_min", [](const EffectPreset& p) { return fmt(p.emitter.jitter_min); },
     [](EffectPreset& p, const json& j) { p.emitter.jitter_min = as_vec3(j); }},
    {"emitter.jitter_max", [](const EffectPreset& p) { return fmt(p.emitter.jitter_max); },
     [](EffectPreset& p, const json& j) { p.emitter.jitter_max = as_vec3(j); }},
    {"render_scale", [](const EffectPreset& p) { return fmt(p.render_scale); },
     [](EffectPreset& p, const json& j) { p.render_scale = as_scale3(j); }},
    {"scale_min", [](const EffectPreset& p) { return fmt(p.scale_min); },
     [](EffectPreset& p, const json& j) { p.scale_min = as_num(j); }},
    {"scale_max", [](const EffectPreset& p) { return fmt(p.scale_max); },
     [](EffectPreset& p, const json& j) { p.scale_max = as_num(j); }},
    {"render_opacity", [](const EffectPreset& p) { return fmt(p.render_opacity); },
     [](EffectPreset& p, const json& j) { p.render_opacity = as_num(j); }},
    {"render_color", [](const EffectPreset& p) { return fmt(p.render_color); },
     [](EffectPreset& p, const json& j) { p.render_color = as_vec3(j); }},
    {"collision_mode",
     [](const EffectPreset& p) { return std::string(collision_mode_to_string(p.collision_mode)); },
     [](EffectPreset& p, const json& j) {
         p.collision_mode = collision_mode_from_string(as_str(j));
     }},
    {"surface_offset", [](const EffectPreset& p) { return fmt(p.surface_offset); },
     [](EffectPreset& p, const json& j) { p.surface_offset = as_num(j); }},
    {"accumulated_scale_min",
     [](const EffectPreset& p) { return fmt(p.accumulated_scale_min); },
     [](EffectPreset& p, const json& j) { p.accumulated_scale_min = as_num(j); }},
    {"accumulated_scale_max",
     [](const EffectPreset& p) { return fmt(p.accumulated_scale_max); },
     [](EffectPreset& p, const json& j) { p.accumulated_scale_max = as_num(j); }},
    {"flatten_ratio", [](const EffectPreset& p) { return fmt(p.flatten_ratio); },
     [](EffectPreset& p, const json& j) { p.flatten_ratio = as_num(j); }},
    {"clone.offset_min",
     [](const EffectPreset& p) { return p.clone ? fmt(p.clone->offset_min) : "none"; },
     [](EffectPreset& p, const json& j) { ensure_clone(p).offset_min = as_num(j); }},
    {"clone.offset_max",
     [](const EffectPreset& p) { return p.clone ? fmt(p.clone->offset_max) : "none"; },
     [](EffectPreset& p, const json& j) { ensure_clone(p).offset_max = as_num(j); }},
    {"clone.scale", [](const EffectPreset& p) { return p.clone ? fmt(p.clone->scale) : "none"; },
     [](EffectPreset& p, const json& j) { ensure_clone(p).scale = as_num(j); }},
    {"clone.opacity",
     [](const EffectPreset& p) { return p.clone ? fmt(p.clone->opacity) : "none"; },
     [](EffectPreset& p, const json& j) { ensure_clone(p).opacity = as_num(j); }},
    {"wetness.decay", [](const EffectPreset& p) { return fmt(p.wetness.decay); },
     [](EffectPreset& p, const json& j) { p.wetness.decay = as_num(j); }},
    {"wetness.resolution", [](const EffectPreset& p) { return fmt(p.wetness.resolution); },
     [](EffectPreset& p, const json& j) { p.wetness.resolution = as_int(j); }},
    {"wetness.sigma_cells", [](const EffectPreset& p) { return fmt(p.wetness.sigma_cells); },
     [](EffectPreset& p, const json& j) { p.wetness.sigma_cells = as_num(j); }},
    {"wetness.radius_cells", [](const EffectPreset& p) { return fmt(p.wetness.radius_cells); },
     [](EffectPreset& p, const json& j) { p.wetness.radius_cells = as_int(j); }},
    {"wetness.darkening_gain",
     [](const EffectPreset& p) { return fmt(p.wetness.darkening_gain); },
     [](EffectPreset& p, const json& j) { p.wetness.darkening_gain = as_num(j); }},
    {"asset.path", [](const EffectPreset& p) { return p.asset ? p.asset->path : "none"; },
     [](EffectPreset& p, const json& j) { ensure_asset(p).path = as_str(j); }},
    {"asset.scale", [](const EffectPreset& p) { return p.asset ? fmt(p.asset->scale) : "none"; },
     [](EffectPreset& p, const json& j) { ensure_asset(p).scale = as_num(j); }},
    {"asset.gs_activations",
     [](const EffectPreset& p) {
         return p.asset ? std::string(p.asset->gs_activations ? "true" : "false") : "none";
     },
     [](EffectPreset& p, const json& j) { ensure_asset(p).gs_activations = as_bool(j); }},
};

}  // namespace

EffectPreset preset(EffectName name) {
    EffectPreset p;
    p.name = name;
    switch (name) {
        case EffectName::Snowfall:
            set_material(p, Material::Snow, 0.14, 0.2);
            top_plane_emitter(p);
            p.emitter.count = 1000;
            p.emitter.period = 2;
            p.emitter.base_velocity = {0, -0.5, 0};
            p.emitter.jitter_min = {-0.1, 0, -0.1};
            p.emitter.jitter_max = {0.1, 0, 0.1};
            p.render_scale = Eigen::Vector3d::Constant(0.005);
            p.render_opacity = 0.65;
            p.render_color = {0.95, 0.95, 0.96};
            p.collision_mode = CollisionMode::SurfaceProject;
            p.surface_offset = 0.01;
            p.accumulated_scale_min = p.accumulated_scale_max = 0.01;
            break;
        case EffectName::Rainfall:
            set_material(p, Material::Fluid, 0.08, 0.45);
            top_plane_emitter(p);
            p.emitter.count = 1000;
            p.emitter.period = 2;
            p.emitter.base_velocity = {0, -0.5, 0};
            p.emitter.jitter_min = {-0.1, 0, -0.1};
            p.emitter.jitter_max = {0.1, 0, 0.1};
            p.render_scale = {0.002, 0.006, 0.002};
            p.render_opacity = 0.25;
            p.render_color = {0.85, 0.87, 0.9};
            p.collision_mode = CollisionMode::WetnessGrid;
            break;
        case EffectName::Sandstorm:
            set_material(p, Material::Sand, 0.08, 0.3);
            p.emitter.region = {{kFaceInset, 0.1, kFaceInset},
                                {kFaceInset, 0.6, 1.0 - kFaceInset}};
            p.emitter.count = 1000;
            p.emitter.period = 2;
            p.emitter.base_velocity = {1.0, 0, 0};
            p.emitter.jitter_min = {-0.2, -0.2, 0};
            p.emitter.jitter_max = {0.2, 0.2, 0};
            p.render_scale = Eigen::Vector3d::Constant(0.0025);
            p.scale_min = 0.0025;
            p.scale_max = 0.003;
            p.render_opacity = 0.85;
            p.render_color = {0.92, 0.79, 0.62};
            p.collision_mode = CollisionMode::SandAccumulate;
            p.surface_offset = 0.001;
            p.accumulated_scale_min = 0.015;
            p.accumulated_scale_max = 0.025;
            p.flatten_ratio = 0.2;
            p.clone = ClonePolicy{};
            break;
        case EffectName::Fog:
            set_material(p, Material::Fluid, 0.08, 0.45);
            p.emitter.region = {{0.05, 0.05, 0.05}, {0.95, 0.95, 0.95}};
            p.emitter.count = 5000;
            p.emitter.period = 1;
            p.emitter.frame_budget = 1;  // one emission at the start
            p.emitter.base_velocity = {0.5, 0, 0};
            p.emitter.jitter_min = {-0.1, -0.1, -0.1};
            p.emitter.jitter_max = {0.1, 0.1, 0.1};
            p.gravity = {0.5, -0.1, 0};
            p.render_scale = Eigen::Vector3d::Constant(0.25);
            p.render_opacity = 0.08;
            p.render_color = {0.85, 0.85, 0.85};
            break;
        case EffectName::Leaves:
            set_material(p, Material::Snow, 0.8, 0.3);
            top_plane_emitter(p);
            p.emitter.count = 7;
            p.emitter.period = 25;
            p.emitter.base_velocity = {0, -0.15, 0};
            p.emitter.jitter_min = {-0.05, -0.05, -0.05};
            p.emitter.jitter_max = {0.05, 0.05, 0.05};
            p.gravity = {0, -4.8, 0};
            p.render_scale = Eigen::Vector3d::Constant(0.01);
            p.render_opacity = 0.85;
            p.render_color = {0.55, 0.35, 0.12};
            p.asset = AssetRef{"", 0.05, true};
            break;
        case EffectName::Feather:
            set_material(p, Material::Snow, 0.8, 0.3);
            top_plane_emitter(p);
            p.emitter.count = 1;
            p.emitter.period = 1;
            p.emitter.frame_budget = 1;  // a single drifting particle
            p.emitter.base_velocity = {0, -0.15, 0};
            p.emitter.jitter_min = {-0.05, -0.05, -0.05};
            p.emitter.jitter_max = {0.05, 0.05, 0.05};
            p.gravity = {0, -4.8, 0};
            p.render_scale = Eigen::Vector3d::Constant(0.01);
            p.render_opacity = 0.85;
            p.render_color = {0.92, 0.92, 0.88};
            p.asset = AssetRef{"", 0.12, true};
            break;
        case EffectName::RigidObject:
            set_material(p, Material::Rigid, 0.8, 0.3);
            p.emitter.region = {{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}};
            p.emitter.count = 0;  // placed via keyframe track, not emitted
            p.emitter.frame_budget = 0;
            p.render_scale = Eigen::Vector3d::Constant(0.03);
            p.render_opacity = 0.85;
            p.render_color = {0.8, 0.8, 0.8};
            p.asset = AssetRef{"", 0.035, true};
            break;
    }
    return p;
}

EffectName effect_from_string(const std::string& s) {
    if (s == "snowfall" || s == "snow") return EffectName::Snowfall;
    if (s == "rainfall" || s == "rain") return EffectName::Rainfall;
    if (s == "fog") return EffectName::Fog;
    if (s == "sandstorm" || s == "sand") return EffectName::Sandstorm;
    if (s == "leaves") return EffectName::Leaves;
    if (s == "feather") return EffectName::Feather;
    if (s == "rigid_object" || s == "rigid") return EffectName::RigidObject;
    fail("unknown effect '", s,
         "' (snowfall|rainfall|fog|sandstorm|leaves|feather|rigid_object)");
}

const char* effect_to_string(EffectName name) {
    switch (name) {
        case EffectName::Snowfall: return "snowfall";
        case EffectName::Rainfall: return "rainfall";
        case EffectName::Fog: return "fog";
        case EffectName::Sandstorm: return "sandstorm";
        case EffectName::Leaves: return "leaves";
        case EffectName::Feather: return "feather";
        case EffectName::RigidObject: return "rigid_object";
    }
    return "?";
}

const char* collision_mode_to_string(CollisionMode m) {
    switch (m) {
        case CollisionMode::SurfaceProject: return "surface_project";
        case CollisionMode::WetnessGrid: return "wetness_grid";
        case CollisionMode::SandAccumulate: return "sand_accumulate";
        case CollisionMode::None: return "none";
    }
    return "?";
}

std::span<const OverrideEntry> override_entries() { return kOverrides; }

std::vector<OverrideRecord> apply_overrides(EffectPreset& p, const json& overrides) {
    if (overrides.is_null()) return {};
    if (!overrides.is_object())
        fail("overrides must be a JSON object, got ", overrides.dump());
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
        bool known = std::any_of(std::begin(kOverrides), std::end(kOverrides),
                                 [&](const OverrideEntry& e) { return it.key() == e.key; });
        if (!known) fail("unknown override key '", it.key(), "'");
    }

    std::vector<OverrideRecord> records;
    for (const OverrideEntry& e : kOverrides) {
        auto it = overrides.find(e.key);
        if (it == overrides.end()) continue;
        OverrideRecord rec;
        rec.key = e.key;
        rec.before = e.get(p);
        try {
            e.set(p, *it);
        } catch (const Error& err) {
            fail("override '", e.key, "': ", err.what());
        }
        rec.after = e.get(p);
        records.push_back(std::move(rec));
    }
    validate_preset(p);
    return records;
}

void validate_preset(const EffectPreset& p) {
    require(p.youngs_modulus > 0.0, "preset: Young's modulus must be > 0, got ",
            p.youngs_modulus);
    require(p.poisson_ratio > 0.0 && p.poisson_ratio < 0.5,
            "preset: Poisson ratio must lie in (0, 0.5), got ", p.poisson_ratio);
    require(p.gravity.allFinite(), "preset: gravity must be finite");
    require(p.render_opacity > 0.0 && p.render_opacity <= 1.0,
            "preset: opacity must lie in (0, 1], got ", p.render_opacity);
    require(p.render_scale.minCoeff() > 0.0, "preset: render scale components must be > 0");
    for (int a = 0; a < 3; ++a)
        require(p.render_color[a] >= 0.0 && p.render_color[a] <= 1.0,
                "preset: color components must lie in [0, 1]");
    require(p.scale_min >= 0.0 && p.scale_max >= p.scale_min,
            "preset: particle scale range needs 0 <= min <= max");
    require(p.scale_max == 0.0 || p.scale_min > 0.0,
            "preset: ranged particle scale needs a positive minimum");

    const EmitterSpec& e = p.emitter;
    require(e.count >= 0, "preset: emitter count must be >= 0, got ", e.count);
    require(e.period >= 1, "preset: emitter period must be >= 1, got ", e.period);
    require(e.frame_budget >= 0, "preset: emitter frame budget must be >= 0");
    for (int a = 0; a < 3; ++a) {
        require(e.region.lo[a] <= e.region.hi[a], "preset: emitter region min > max on axis ", a);
        require(e.region.lo[a] >= 0.0 && e.region.hi[a] <= 1.0,
                "preset: emitter region outside [0,1]^3 on axis ", a);
        require(e.jitter_min[a] <= e.jitter_max[a],
                "preset: emitter jitter min > max on axis ", a);
    }

    require(p.surface_offset >= 0.0, "preset: surface offset must be >= 0");
    require(p.accumulated_scale_min >= 0.0 && p.accumulated_scale_max >= p.accumulated_scale_min,
            "preset: accumulated scale range needs 0 <= min <= max");
    require(p.collision_mode != CollisionMode::SurfaceProject || p.accumulated_scale_min > 0.0,
            "preset: surface projection needs a positive accumulated scale");
    require(p.collision_mode != CollisionMode::SandAccumulate || p.accumulated_scale_min > 0.0,
            "preset: sand accumulation needs a positive accumulated scale");
    require(p.flatten_ratio > 0.0 && p.flatten_ratio <= 1.0,
            "preset: flatten ratio must lie in (0, 1], got ", p.flatten_ratio);

    if (p.clone) {
        require(p.clone->offset_min >= 0.0 && p.clone->offset_max >= p.clone->offset_min,
                "preset: clone offset range needs 0 <= min <= max");
        require(p.clone->scale > 0.0, "preset: clone scale must be > 0");
        require(p.clone->opacity > 0.0 && p.clone->opacity <= 1.0,
                "preset: clone opacity must lie in (0, 1]");
    }

    const WetnessParams& w = p.wetness;
    require(w.decay > 0.0 && w.decay < 1.0, "preset: wetness decay must lie in (0, 1), got ",
            w.decay);
    require(w.resolution >= 2, "preset: wetness resolution must be >= 2");
    require(w.sigma_cells > 0.0, "preset: wetness sigma must be > 0");
    require(w.radius_cells >= 1, "preset: wetness kernel radius must be >= 1");
    require(w.darkening_gain >= 0.0, "preset: wetness darkening gain must be >= 0");

    if (p.asset) require(p.asset->scale > 0.0, "preset: asset scale must be > 0");
}

std::vector<GaussianSplat> particles_to_gaussians(std::span<const Particle> particles,
                                                  const EffectPreset& preset,
                                                  const SimTransform& transform, uint64_t seed,
                                                  bool strict_rotation,
                                                  const AssetGaussians* asset) {
    std::vector<GaussianSplat> out;
    out.reserve(particles.size());
    const double asset_scale = preset.asset ? preset.asset->scale : 1.0;

    for (const Particle& p : particles) {
        if (!p.active || p.material == Material::Stationary) continue;

        Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
        // Fluids reset F to an isotropic multiple of I every substep and
        // rigid bodies keep F = I, so their polar rotation is exactly the
        // identity; only elastic/granular splats need the decomposition.
        if (p.material == Material::Snow || p.material == Material::Sand)
            q = rotation_from_deformation(p.def_grad, strict_rotation);

        if (asset) {
            std::vector<GaussianSplat> placed = align_asset(*asset, p.position, q, asset_scale);
            out.insert(out.end(), placed.begin(), placed.end());
            continue;
        }

        GaussianSplat s;
        s.position = p.position;
        s.rotation = q;
        s.opacity = preset.render_opacity;
        s.rgb = preset.render_color;
        if (preset.scale_max > 0.0) {
            Rng rng(stream_key(seed, rng_salt::kSandScale, p.id));
            s.scale = Eigen::Vector3d::Constant(rng.uniform(preset.scale_min, preset.scale_max));
        } else {
            s.scale = preset.render_scale;
        }
        out.push_back(s);

        if (preset.clone) {
            Rng rng(stream_key(seed, rng_salt::kSandClone, p.id));
            double z = rng.uniform(-1.0, 1.0);
            double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            Eigen::Vector3d dir{r * std::cos(phi), r * std::sin(phi), z};
            double mag = rng.uniform(preset.clone->offset_min, preset.clone->offset_max);

            GaussianSplat c = s;
            c.position += mag * dir;
            c.scale = Eigen::Vector3d::Constant(preset.clone->scale);
            c.opacity = preset.clone->opacity;
            out.push_back(c);
        }
    }

    for (GaussianSplat& s : out) {
        s.position = transform.to_world(s.position);
        s.scale /= transform.scale;
    }
    return out;
}

}  // namespace gsw
