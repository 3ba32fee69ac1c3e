#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace gsw {

// Stationary: static-scene obstacle particles; deposit mass, never move.
// Snow/Sand:  elastic with singular-value plasticity (sand wider, softer).
// Fluid:      pressure-only volume model (rain, fog).
// Rigid:      keyframed pose, no constitutive response.
enum class Material { Stationary, Snow, Fluid, Sand, Rigid };

const char* material_name(Material m);

struct Particle {
    Eigen::Vector3d position{0, 0, 0};  // sim units
    Eigen::Vector3d velocity{0, 0, 0};  // sim units per second
    Eigen::Matrix3d affine = Eigen::Matrix3d::Zero();       // APIC C matrix
    Eigen::Matrix3d def_grad = Eigen::Matrix3d::Identity();  // F
    // Rotation factor of def_grad, maintained incrementally for the
    // corotated stress; refreshed by every plasticity projection.
    Eigen::Matrix3d stress_rot = Eigen::Matrix3d::Identity();
    double plastic_det = 1.0;  // snow hardening memory Jp; fluids: volume ratio J
    double mu0 = 0.0, lambda0 = 0.0;  // Lamé parameters at emission
    Material material = Material::Snow;
    bool active = true;
    uint64_t id = 0;
    int spawn_frame = 0;
    // Position at the start of the current output frame; the inactivity
    // test measures per-frame displacement against it.
    Eigen::Vector3d frame_start_position{0, 0, 0};
};

inline double lame_mu(double youngs, double poisson) {
    return youngs / (2.0 * (1.0 + poisson));
}
inline double lame_lambda(double youngs, double poisson) {
    return youngs * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
}

}  // namespace gsw
