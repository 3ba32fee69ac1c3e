#include "gsw/collision.hpp"

#include <algorithm>
#include <cmath>

#include "gsw/error.hpp"
#include "gsw/rng.hpp"

namespace gsw {

WetnessGrid::WetnessGrid(const Aabb& mesh_bounds, const WetnessParams& params) {
    require(mesh_bounds.valid(), "wetness grid: invalid mesh bounds");
    require(params.resolution >= 2, "wetness grid: resolution must be >= 2");
    bounds = mesh_bounds;
    // Flat meshes (a lone ground plane) collapse an axis; give every axis
    // enough thickness that cell mapping stays well defined.
    double pad = std::max(1e-6, 1e-2 * bounds.extent().maxCoeff());
    for (int a = 0; a < 3; ++a) {
        if (bounds.extent()[a] < pad) {
            bounds.lo[a] -= 0.5 * pad;
            bounds.hi[a] += 0.5 * pad;
        }
    }
    res = params.resolution;
    sigma_cells = params.sigma_cells;
    radius_cells = params.radius_cells;
    values.assign(static_cast<size_t>(res) * res * res, 0.0);
}

double WetnessGrid::sample(const Eigen::Vector3d& p) const {
    if (values.empty() || !contains(p)) return 0.0;
    Eigen::Vector3d cell = cell_size();
    double u[3];
    int i0[3];
    for (int a = 0; a < 3; ++a) {
        // Continuous coordinate in cell-center units, edge-clamped.
        double c = (p[a] - bounds.lo[a]) / cell[a] - 0.5;
        c = std::clamp(c, 0.0, static_cast<double>(res - 1));
        i0[a] = std::min(static_cast<int>(c), res - 2);
        u[a] = c - i0[a];
    }
    double acc = 0.0;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
            for (int dk = 0; dk < 2; ++dk) {
                double w = (di ? u[0] : 1.0 - u[0]) * (dj ? u[1] : 1.0 - u[1]) *
                           (dk ? u[2] : 1.0 - u[2]);
                acc += w * values[index(i0[0] + di, i0[1] + dj, i0[2] + dk)];
            }
    return acc;
}

double WetnessGrid::total() const {
    double t = 0.0;
    for (double v : values) t += v;
    return t;
}

void splat_wetness(WetnessGrid& grid, const Eigen::Vector3d& impact) {
    require(!grid.values.empty(), "splat_wetness: grid not initialized");
    if (!grid.contains(impact)) return;

    Eigen::Vector3d cell = grid.cell_size();
    int c[3];
    for (int a = 0; a < 3; ++a) {
        int i = static_cast<int>((impact[a] - grid.bounds.lo[a]) / cell[a]);
        c[a] = std::clamp(i, 0, grid.res - 1);
    }

    // Normalize over the in-bounds part of the kernel so each impact
    // deposits exactly one unit of wetness even at the rim.
    const int r = grid.radius_cells;
    const double inv_two_sigma2 = 1.0 / (2.0 * grid.sigma_cells * grid.sigma_cells);
    double total = 0.0;
    for (int di = -r; di <= r; ++di) {
        if (c[0] + di < 0 || c[0] + di >= grid.res) continue;
        for (int dj = -r; dj <= r; ++dj) {
            if (c[1] + dj < 0 || c[1] + dj >= grid.res) continue;
            for (int dk = -r; dk <= r; ++dk) {
                if (c[2] + dk < 0 || c[2] + dk >= grid.res) continue;
                total += std::exp(-(di * di + dj * dj + dk * dk) * inv_two_sigma2);
            }
        }
    }
    double inv_total = 1.0 / total;
    for (int di = -r; di <= r; ++di) {
        if (c[0] + di < 0 || c[0] + di >= grid.res) continue;
        for (int dj = -r; dj <= r; ++dj) {
            if (c[1] + dj < 0 || c[1] + dj >= grid.res) continue;
            for (int dk = -r; dk <= r; ++dk) {
                if (c[2] + dk < 0 || c[2] + dk >= grid.res) continue;
                double w = std::exp(-(di * di + dj * dj + dk * dk) * inv_two_sigma2);
                grid.values[grid.index(c[0] + di, c[1] + dj, c[2] + dk)] += w * inv_total;
            }
        }
    }
}

void decay_wetness(WetnessGrid& grid, double decay) {
    require(decay > 0.0 && decay < 1.0, "decay_wetness: decay must lie in (0, 1), got ", decay);
    for (double& v : grid.values) v *= decay;
}

std::vector<double> wetness_factors(const GaussianScene& scene, const WetnessGrid& grid,
                                    double gain) {
    std::vector<double> f(scene.splats.size(), 1.0);
    if (grid.values.empty()) return f;
    for (size_t i = 0; i < scene.splats.size(); ++i) {
        double w = grid.sample(scene.splats[i].position);
        if (w > 0.0) f[i] = 1.0 / (1.0 + gain * w);
    }
    return f;
}

std::vector<Eigen::Vector3d> apply_wetness_to_scene(const GaussianScene& scene,
                                                    const WetnessGrid& grid, double gain) {
    std::vector<double> f = wetness_factors(scene, grid, gain);
    std::vector<Eigen::Vector3d> colors(scene.splats.size());
    for (size_t i = 0; i < scene.splats.size(); ++i) colors[i] = scene.splats[i].rgb * f[i];
    return colors;
}

namespace {

// Proper rotation whose local y-axis is the surface normal and whose x/z
// axes span the tangent plane, built deterministically from the normal.
Eigen::Quaterniond tangent_frame(const Eigen::Vector3d& normal) {
    Eigen::Vector3d n = normal.normalized();
    int smallest = 0;
    for (int a = 1; a < 3; ++a)
        if (std::abs(n[a]) < std::abs(n[smallest])) smallest = a;
    Eigen::Vector3d t1 = n.cross(Eigen::Vector3d::Unit(smallest)).normalized();
    Eigen::Vector3d t2 = t1.cross(n);  // columns (t1, n, t2) are right-handed
    Eigen::Matrix3d r;
    r.col(0) = t1;
    r.col(1) = n;
    r.col(2) = t2;
    return Eigen::Quaterniond(r).normalized();
}

}  // namespace

AccumulatedSplat project_snow(const CollisionEvent& event, const Bvh& bvh,
                              const EffectPreset& preset) {
    SurfaceHit hit = bvh.closest_point(event.position);
    AccumulatedSplat out;
    out.splat.position = hit.point + preset.surface_offset * hit.normal;
    out.splat.rotation = Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitY(), hit.normal)
                             .normalized();
    out.splat.scale = Eigen::Vector3d::Constant(preset.accumulated_scale_min);
    out.splat.opacity = preset.render_opacity;
    out.splat.rgb = preset.render_color;
    out.birth_frame = event.frame;
    out.source_event = event.particle_id;
    return out;
}

AccumulatedSplat project_sand(const CollisionEvent& event, const Bvh& bvh,
                              const EffectPreset& preset, uint64_t seed) {
    SurfaceHit hit = bvh.closest_point(event.position);
    Rng rng(stream_key(seed, rng_salt::kSandRest, event.particle_id));
    double tangent = rng.uniform(preset.accumulated_scale_min, preset.accumulated_scale_max);

    AccumulatedSplat out;
    out.splat.position = hit.point + preset.surface_offset * hit.normal;
    out.splat.rotation = tangent_frame(hit.normal);
    out.splat.scale = {tangent, preset.flatten_ratio * tangent, tangent};
    out.splat.opacity = preset.render_opacity;
    out.splat.rgb = preset.render_color;
    out.birth_frame = event.frame;
    out.source_event = event.particle_id;
    return out;
}

}  // namespace gsw
