#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gsw {

// Quaternion convention project-wide: component order (w, x, y, z), unit
// norm, q and -q describe the same rotation. Round trips through rotation
// matrices may therefore return -q; compare rotations, not raw components.

Eigen::Matrix3d matrix_from_quaternion(const Eigen::Quaterniond& q);

// Requires a proper rotation (orthonormal, det +1) within `tol`; throws
// gsw::Error otherwise. Returned quaternion has w >= 0.
Eigen::Quaterniond quaternion_from_matrix(const Eigen::Matrix3d& r, double tol = 1e-6);

struct Svd3 {
    Eigen::Matrix3d u;       // orthogonal, det may be -1
    Eigen::Vector3d sigma;   // descending, nonnegative
    Eigen::Matrix3d v;       // orthogonal, det may be -1
};

// Full SVD of a 3x3 matrix: m = u * sigma.asDiagonal() * v^T. Closed-form
// eigen-solve on m^T m with an iterative fallback when the reconstruction
// residual is poor (near-degenerate inputs).
Svd3 svd3(const Eigen::Matrix3d& m);

// Proper rotation factor of f (det +1, closest rotation for det(f) > 0).
// Reflections from negative singular values are absorbed into the axis of
// the smallest singular value.
Eigen::Matrix3d polar_rotation(const Eigen::Matrix3d& f);

// Incremental polar rotation: refines `r` (a rotation near the polar factor
// of f, e.g. from the previous simulation substep) toward the polar factor.
// Much cheaper than svd3 when the rotation changes slowly between calls.
Eigen::Matrix3d polar_rotation_warm(const Eigen::Matrix3d& f, const Eigen::Matrix3d& r);

}  // namespace gsw
