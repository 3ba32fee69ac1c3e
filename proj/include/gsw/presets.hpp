#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsw/asset.hpp"
#include "gsw/mpm.hpp"

namespace gsw {

enum class EffectName { Snowfall, Rainfall, Fog, Sandstorm, Leaves, Feather, RigidObject };

// What happens to a particle's recorded collision event:
//   SurfaceProject — freeze a splat on the mesh along the hit normal (snow)
//   SandAccumulate — as above with anisotropic flattening and sampled scale
//   WetnessGrid    — no splat; deposit wetness at the impact (rain)
//   None           — freeze the splat at its final simulated pose
enum class CollisionMode { SurfaceProject, WetnessGrid, SandAccumulate, None };

struct ClonePolicy {
    double offset_min = 0.001, offset_max = 0.005;  // |offset|, random direction
    double scale = 0.035;
    double opacity = 0.15;
};

struct WetnessParams {
    double decay = 0.95;
    int resolution = 64;
    double sigma_cells = 1.5;
    int radius_cells = 3;
    double darkening_gain = 0.4;
};

struct AssetRef {
    std::string path;       // empty: render plain splats instead
    double scale = 0.05;    // uniform, sim units
    bool gs_activations = true;  // false for assets authored with plain values
};

// Full parameterization of one effect. All geometric quantities (emitter
// region, scales, offsets) are in normalized simulation units.
struct EffectPreset {
    EffectName name = EffectName::Snowfall;
    Material material = Material::Snow;
    double youngs_modulus = 0.1;
    double poisson_ratio = 0.3;
    EmitterSpec emitter;
    Eigen::Vector3d gravity{0, -9.8, 0};

    Eigen::Vector3d render_scale{0.005, 0.005, 0.005};
    double scale_min = 0.0, scale_max = 0.0;  // when max > 0: per-particle isotropic draw
    double render_opacity = 1.0;
    Eigen::Vector3d render_color{1, 1, 1};

    CollisionMode collision_mode = CollisionMode::None;
    double surface_offset = 0.0;
    double accumulated_scale_min = 0.0, accumulated_scale_max = 0.0;
    double flatten_ratio = 0.2;  // accumulated sand: normal-axis scale factor

    std::optional<ClonePolicy> clone;
    WetnessParams wetness;
    std::optional<AssetRef> asset;
};

// The golden parameter table. Values are the published per-effect numbers;
// see the unit tests for the full cross-check.
EffectPreset preset(EffectName name);

EffectName effect_from_string(const std::string& s);  // throws on unknown name
const char* effect_to_string(EffectName name);
const char* collision_mode_to_string(CollisionMode m);

// One applied override, for provenance echoes in the CLI.
struct OverrideRecord {
    std::string key;
    std::string before;
    std::string after;
};

// Applies `overrides` (a flat JSON object keyed by the names below) to the
// preset and validates the result. Unknown keys and ill-typed values throw
// gsw::Error. Returns the applied records in key order of the table.
std::vector<OverrideRecord> apply_overrides(EffectPreset& p, const nlohmann::json& overrides);

// Override surface: one entry per overridable field.
struct OverrideEntry {
    const char* key;
    std::string (*get)(const EffectPreset&);
    void (*set)(EffectPreset&, const nlohmann::json&);
};
std::span<const OverrideEntry> override_entries();

// Throws gsw::Error when invariants are violated (E > 0, 0 < ν < 0.5,
// opacity in (0,1], positive scales, period >= 1, decay in (0,1), ...).
void validate_preset(const EffectPreset& p);

// Renderable splats for the active dynamic particles of one frame, in world
// coordinates. Rotation comes from the deformation gradient (identity for
// fluids, whose deformation state is isotropic by construction, and for
// fog by its preset); sand draws a stable per-particle size and appends one
// clone per splat; presets with an asset expand every particle into the
// aligned asset instead. Frozen (collision-resolved) splats are carried
// separately by the pipeline's accumulated list. All preset lengths are sim
// units; output positions and scales are world units.
std::vector<GaussianSplat> particles_to_gaussians(std::span<const Particle> particles,
                                                  const EffectPreset& preset,
                                                  const SimTransform& transform, uint64_t seed,
                                                  bool strict_rotation,
                                                  const AssetGaussians* asset = nullptr);

}  // namespace gsw
