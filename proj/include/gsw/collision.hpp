#pragma once

#include <cstdint>
#include <vector>

#include "gsw/aabb.hpp"
#include "gsw/bvh.hpp"
#include "gsw/mpm.hpp"
#include "gsw/presets.hpp"
#include "gsw/scene.hpp"

namespace gsw {

// Per-cell accumulated wetness over the mesh footprint. Cells may be
// anisotropic (the bounding box is not cubed up); kernel and sampling work
// in cell units. Degenerate axes are padded so every box has volume.
struct WetnessGrid {
    Aabb bounds{{0, 0, 0}, {1, 1, 1}};
    int res = 64;
    double sigma_cells = 1.5;
    int radius_cells = 3;
    std::vector<double> values;  // res^3, x-major then y then z

    WetnessGrid() = default;
    WetnessGrid(const Aabb& mesh_bounds, const WetnessParams& params);

    size_t index(int i, int j, int k) const {
        return (static_cast<size_t>(i) * res + j) * res + k;
    }
    Eigen::Vector3d cell_size() const { return bounds.extent() / res; }
    bool contains(const Eigen::Vector3d& p) const { return bounds.contains(p); }

    // Trilinear wetness at a point; 0 outside the bounds, edge-clamped at
    // the rim.
    double sample(const Eigen::Vector3d& p) const;

    double total() const;
};

// Adds a normalized Gaussian bump (sigma/radius from the grid) centered at
// the cell containing `impact`; the deposit sums to exactly 1. Impacts
// outside the bounds are ignored (the drop left the mesh region).
void splat_wetness(WetnessGrid& grid, const Eigen::Vector3d& impact);

// Exponential drying: every cell multiplied by `decay`.
void decay_wetness(WetnessGrid& grid, double decay);

// Per-splat darkening factors 1/(1 + gain * wetness(center)); the renderer
// applies them after color evaluation so view-dependent colors darken too.
std::vector<double> wetness_factors(const GaussianScene& scene, const WetnessGrid& grid,
                                    double gain);

// Darkened copy of the scene's base colors; the scene itself is untouched.
std::vector<Eigen::Vector3d> apply_wetness_to_scene(const GaussianScene& scene,
                                                    const WetnessGrid& grid, double gain);

// A splat frozen onto the mesh by collision handling; never re-simulated.
struct AccumulatedSplat {
    GaussianSplat splat;  // sim units (same space as the collision mesh)
    int birth_frame = 0;
    uint64_t source_event = 0;  // particle id of the recorded event
};

// Snow rests where it hit: closest surface point plus `surface_offset`
// along the normal, isotropic accumulated scale, local y-axis aligned to
// the normal, appearance from the preset.
AccumulatedSplat project_snow(const CollisionEvent& event, const Bvh& bvh,
                              const EffectPreset& preset);

// Sand flattens onto the surface: offset as configured (0.001), tangent
// scale drawn from [accumulated_scale_min, accumulated_scale_max] with the
// normal axis flattened by `flatten_ratio`, oriented to the tangent frame.
// Deterministic in (seed, event particle id).
AccumulatedSplat project_sand(const CollisionEvent& event, const Bvh& bvh,
                              const EffectPreset& preset, uint64_t seed);

}  // namespace gsw
