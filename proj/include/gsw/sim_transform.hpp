#pragma once

#include <Eigen/Core>

#include "gsw/aabb.hpp"

namespace gsw {

// Similarity map from world (scene) coordinates into the unit simulation
// cube: sim = world * scale + translation. Uniform and axis-aligned, so
// rotations and shapes are preserved; lengths scale by `scale`.
//
// Fitting policy (compute_normalization): the combined scene+mesh bounds
// are scaled by 1/max_extent so the largest axis spans exactly the unit
// cube, centered in x and z. The lowest point rests at y = ground (0.02)
// unless the scene is tall enough that the shift would push the top past
// y = 1, in which case the ground shift shrinks to keep containment.
struct SimTransform {
    double scale = 1.0;
    Eigen::Vector3d translation{0, 0, 0};

    Eigen::Vector3d to_sim(const Eigen::Vector3d& world) const {
        return world * scale + translation;
    }
    Eigen::Vector3d to_world(const Eigen::Vector3d& sim) const {
        return (sim - translation) / scale;
    }
    // Lengths (splat radii, offsets) transform by scale alone.
    double length_to_sim(double world_len) const { return world_len * scale; }
    double length_to_world(double sim_len) const { return sim_len / scale; }
};

inline constexpr double kSimGroundHeight = 0.02;

// Throws gsw::Error for degenerate bounds (max extent not strictly
// positive or invalid box).
SimTransform compute_normalization(const Aabb& world_bounds);

}  // namespace gsw
