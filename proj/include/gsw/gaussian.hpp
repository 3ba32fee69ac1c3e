#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <span>

namespace gsw {

// One anisotropic Gaussian kernel. `scale` holds per-axis standard
// deviations after activation (strictly positive), `rotation` the unit
// quaternion (w, x, y, z) orienting the principal axes, `opacity` in [0, 1]
// after activation, and `rgb` a flat linear color in [0, 1]^3.
//
// View-dependent color for scene splats lives as a spherical-harmonic block
// in GaussianScene; splats spawned by effects only ever carry flat colors.
struct GaussianSplat {
    Eigen::Vector3d position{0, 0, 0};
    Eigen::Quaterniond rotation{1, 0, 0, 0};
    Eigen::Vector3d scale{1, 1, 1};
    double opacity = 1.0;
    Eigen::Vector3d rgb{1, 1, 1};
};

// World-space covariance R diag(scale^2) R^T; symmetric positive definite
// for positive scales. Throws gsw::Error when |q| deviates from 1 beyond
// `tol` or any scale is not strictly positive.
Eigen::Matrix3d covariance_from(const Eigen::Quaterniond& rotation, const Eigen::Vector3d& scale,
                                double tol = 1e-6);

inline int sh_coeff_count(int degree) { return (degree + 1) * (degree + 1); }

// Evaluates a spherical-harmonic color block for a unit view direction.
// `coeffs` is channel-major: all R coefficients, then G, then B, each
// (degree+1)^2 long, entry 0 the DC term. The result follows the splat
// color convention 0.5 + SH(dir), clamped to [0, 1].
Eigen::Vector3d evaluate_sh(int degree, std::span<const double> coeffs,
                            const Eigen::Vector3d& dir);

}  // namespace gsw
