#pragma once

#include <Eigen/Geometry>
#include <string>
#include <vector>

#include "gsw/gaussian.hpp"

namespace gsw {

// A splat-based object (leaf, drone, feather, ...) in its own local frame,
// normalized relative to a reference point and orientation so one control
// particle can carry the whole object through the simulation.
struct AssetGaussians {
    std::vector<GaussianSplat> splats;
    Eigen::Vector3d reference_point{0, 0, 0};
    Eigen::Quaterniond reference_orientation{1, 0, 0, 0};
};

// Loads an asset PLY (same layout as scene files). When the file carries
// plain activated values, pass apply_activations = false. The reference
// point defaults to the bounding-box bottom-center and the orientation to
// identity; both may be overridden by the caller afterwards.
AssetGaussians load_asset(const std::string& path, bool apply_activations = true);

// Places the asset at a particle pose: every splat is rotated by
// (pose_rotation ∘ reference_orientation⁻¹) about the reference point,
// scaled uniformly, and translated so the reference point lands on
// pose_position. Splat rotations compose by quaternion multiplication;
// pairwise distances scale uniformly. Throws gsw::Error for scale <= 0.
std::vector<GaussianSplat> align_asset(const AssetGaussians& asset,
                                       const Eigen::Vector3d& pose_position,
                                       const Eigen::Quaterniond& pose_rotation,
                                       double uniform_scale);

}  // namespace gsw
