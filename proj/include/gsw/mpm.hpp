#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "gsw/aabb.hpp"
#include "gsw/particle.hpp"
#include "gsw/scene.hpp"
#include "gsw/sim_transform.hpp"

namespace gsw {

// Background grid; `res` nodes per axis over the unit cube, dx = 1/res.
// Holds momentum during scatter, velocity after the grid update.
struct MpmGrid {
    int res;
    double dx, inv_dx;
    std::vector<double> mass;
    std::vector<double> vx, vy, vz;

    explicit MpmGrid(int res_ = 64)
        : res(res_), dx(1.0 / res_), inv_dx(static_cast<double>(res_)) {
        size_t n = static_cast<size_t>(res) * res * res;
        mass.assign(n, 0.0);
        vx.assign(n, 0.0);
        vy.assign(n, 0.0);
        vz.assign(n, 0.0);
    }

    size_t index(int i, int j, int k) const {
        return (static_cast<size_t>(i) * res + j) * res + k;
    }
};

struct SimConfig {
    Eigen::Vector3d gravity{0, -9.8, 0};
    int substeps = 25;          // per output frame
    double dt = 2e-4;           // sim seconds per substep
    double inactivity_threshold = 1e-3;  // δ: per-frame displacement below this deactivates
    double domain_margin = 0.05;         // Ω = [-margin, 1+margin]^3
    uint64_t seed = 0;
    int total_frames = 250;

    // Implementation knobs (defaults are the documented reference behavior).
    int threads = 1;                      // 1 = single-threaded reference mode
    bool strict_paper_rotation = false;   // see rotation_from_deformation
    bool collect_stats = false;           // per-substep conservation audit
    double particle_mass = 1.0;
    double particle_volume = (1.0 / 64) * (1.0 / 64) * (1.0 / 64) / 4.0;
    int spawn_grace_frames = 10;          // snow/sand exempt from inactivity early on
    double max_cells_per_substep = 2.0;   // velocity clamp (anti-tunneling)
    double stationary_zero_fraction = 0.9;
};

// Running conservation audit, filled when SimConfig::collect_stats is set.
// Errors are relative to the pre-scatter particle totals.
struct SimStats {
    double max_mass_err = 0.0;
    double max_momentum_err = 0.0;
    int64_t substeps_measured = 0;
};

struct CollisionEvent {
    uint64_t particle_id = 0;
    int frame = 0;
    Eigen::Vector3d position{0, 0, 0};       // sim units
    Eigen::Quaterniond rotation{1, 0, 0, 0};  // from the deformation gradient
};

// Piecewise-linear keyframed trajectory; frames strictly increasing.
struct KeyframeTrack {
    std::vector<std::pair<double, Eigen::Vector3d>> keys;
};

// Clamped interpolation: position at `frame`, velocity = segment slope in
// units per frame (zero outside the key range). Throws gsw::Error for
// fewer than 2 keys or non-increasing frames.
std::pair<Eigen::Vector3d, Eigen::Vector3d> keyframed_position(const KeyframeTrack& track,
                                                               double frame);

struct EmitterSpec {
    Aabb region{{0, 0, 0}, {0, 0, 0}};  // sim units; axes may be degenerate (plane/point)
    int count = 0;                      // particles per emission
    int period = 1;                     // frames between emissions
    int frame_budget = std::numeric_limits<int>::max();  // emission while frame < budget
    Eigen::Vector3d base_velocity{0, 0, 0};
    Eigen::Vector3d jitter_min{0, 0, 0};  // added componentwise, uniform draw
    Eigen::Vector3d jitter_max{0, 0, 0};
    Material material = Material::Snow;
    double youngs_modulus = 0.1;
    double poisson_ratio = 0.3;
};

struct SimState {
    std::vector<Particle> particles;  // stationary and dynamic, spawn order
    MpmGrid grid;
    int frame = 0;        // frames completed
    uint64_t next_id = 1;
    std::optional<KeyframeTrack> rigid_track;  // drives Material::Rigid particles
    SimStats stats;

    // Internal: cached grid-mass deposition of the stationary particles
    // (they scatter identical mass every substep) and the per-frame list of
    // active dynamic particle indices.
    std::vector<double> static_mass;
    double static_mass_sum = 0.0;
    bool static_cache_valid = false;
    std::vector<uint32_t> active_idx;

    explicit SimState(int grid_res = 64) : grid(grid_res) {}
};

// One obstacle particle per splat at the transformed center; velocity zero,
// F identity. Positions are clamped into the band the grid transfers can
// address (half a cell from the lower faces, 1.5 cells from the upper), so
// scene corners never scatter out of range.
std::vector<Particle> gaussians_to_stationary_particles(const GaussianScene& scene,
                                                        const SimTransform& transform);

// Emission for frame `frame`: spec.count particles, positions uniform in
// the region, velocity = base + per-component uniform jitter. Returns empty
// when the frame misses the period or exceeds the budget. Deterministic in
// (seed, frame, particle index); draws are independent of call order.
// Throws gsw::Error when the region leaves [0,1]^3 or invariants fail.
std::vector<Particle> emit(const EmitterSpec& spec, int frame, uint64_t seed);

// Appends particles to the state, assigning ids (emit() already stamped the
// spawn frame). Dynamic positions are clamped into [margin, 1-margin] (at
// least 2 cells), stationary ones into the addressable transfer band.
void add_particles(SimState& state, const SimConfig& cfg, std::vector<Particle> batch);

// Advances one output frame: `substeps` iterations of scatter (P2G) → grid
// update (gravity, stationary-dominated node zeroing, zero-normal-velocity
// bands at the domain faces) → gather (G2P) with material plasticity and
// advection. Throws gsw::Error naming frame and particle id when a
// non-finite value appears.
void step(SimState& state, const SimConfig& config);

// Per-frame activity update: deactivates particles that moved less than
// the threshold (recording a CollisionEvent with pose and rotation) or left
// Ω (no event). Stationary and Rigid particles are exempt, as are
// snow/sand within their spawn grace period. Call once after each step().
std::vector<CollisionEvent> update_active_flags(SimState& state, const SimConfig& config);

// Proper rotation (det +1) of the deformation gradient via SVD, as a unit
// quaternion. Default composes U Vᵀ with a sign flip on U's last column if
// needed; `strict_paper` returns the transpose convention V Uᵀ instead.
// Throws gsw::Error for singular F.
Eigen::Quaterniond rotation_from_deformation(const Eigen::Matrix3d& f, bool strict_paper = false);

}  // namespace gsw
