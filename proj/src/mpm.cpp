#include "gsw/mpm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gsw/error.hpp"
#include "gsw/linalg.hpp"
#include "gsw/rng.hpp"

namespace gsw {

const char* material_name(Material m) {
    switch (m) {
        case Material::Stationary: return "stationary";
        case Material::Snow: return "snow";
        case Material::Fluid: return "fluid";
        case Material::Sand: return "sand";
        case Material::Rigid: return "rigid";
    }
    return "?";
}

namespace {

// Grid transfers address nodes [base, base+2] with base = floor(x/dx - 0.5),
// so positions must keep base in [0, res-3]. Stationary particles are
// clamped to that outer band; dynamic particles advect within the domain
// margin (at least 2 cells), which keeps them both addressable and inside
// [margin, 1-margin]^3 as the safety invariant demands.
constexpr double kEps = 1e-9;

double stationary_lo(const MpmGrid& g) { return 0.5 * g.dx + kEps; }
double stationary_hi(const MpmGrid& g) { return 1.0 - 1.5 * g.dx - kEps; }
double dynamic_lo(const MpmGrid& g, const SimConfig& cfg) {
    return std::max(cfg.domain_margin, 2.0 * g.dx);
}
double dynamic_hi(const MpmGrid& g, const SimConfig& cfg) { return 1.0 - dynamic_lo(g, cfg); }

constexpr int kBoundaryBand = 3;  // nodes per face absorbing outward normal velocity

// Singular-value clamp bounds (plasticity). Snow values follow the
// classical MPM snow model; sand uses a wider, softer clamp and no
// hardening.
constexpr double kSnowClampLo = 1.0 - 2.5e-2;
constexpr double kSnowClampHi = 1.0 + 4.5e-3;
constexpr double kSandClampLo = 1.0 - 7.5e-2;
constexpr double kSandClampHi = 1.0 + 7.5e-3;
constexpr double kHardeningJpLo = 0.6;
constexpr double kHardeningJpHi = 20.0;

struct QuadWeights {
    int base[3];
    double w[3][3];    // w[axis][offset]
    double xp[3];      // position in cell units
};

inline QuadWeights quad_weights(const Eigen::Vector3d& pos, double inv_dx) {
    QuadWeights q;
    for (int a = 0; a < 3; ++a) {
        double x = pos[a] * inv_dx;
        q.xp[a] = x;
        int b = static_cast<int>(x - 0.5);  // x >= 0.5 guaranteed by clamps
        q.base[a] = b;
        double fx = x - b;  // in [0.5, 1.5]
        q.w[a][0] = 0.5 * (1.5 - fx) * (1.5 - fx);
        q.w[a][1] = 0.75 - (fx - 1.0) * (fx - 1.0);
        q.w[a][2] = 0.5 * (fx - 0.5) * (fx - 0.5);
    }
    return q;
}

// Kirchhoff-style stress of the fixed-corotated family, premultiplied by
// the MLS-MPM fused factor -4 inv_dx^2 dt vol.
Eigen::Matrix3d stress_affine(const Particle& p, const SimConfig& cfg, double inv_dx) {
    double factor = -4.0 * inv_dx * inv_dx * cfg.dt * cfg.particle_volume;
    switch (p.material) {
        case Material::Fluid: {
            double j = p.plastic_det;
            double pressure = p.lambda0 * j * (j - 1.0);
            return (factor * pressure) * Eigen::Matrix3d::Identity();
        }
        case Material::Snow:
        case Material::Sand: {
            double h = 1.0;
            if (p.material == Material::Snow)
                h = std::exp(10.0 * (1.0 - p.plastic_det));  // hardening
            double mu = p.mu0 * h, lambda = p.lambda0 * h;
            double j = p.def_grad.determinant();
            Eigen::Matrix3d s =
                2.0 * mu * (p.def_grad - p.stress_rot) * p.def_grad.transpose();
            s += (lambda * j * (j - 1.0)) * Eigen::Matrix3d::Identity();
            return factor * s;
        }
        default: return Eigen::Matrix3d::Zero();  // Rigid, Stationary
    }
}

void scatter_mass_only(const Particle& p, double pmass, MpmGrid& grid,
                       std::vector<double>& mass) {
    // Clamp a copy so hand-built states cannot scatter out of range; the
    // particle itself stays bitwise untouched.
    Eigen::Vector3d pos =
        p.position.cwiseMax(stationary_lo(grid)).cwiseMin(stationary_hi(grid));
    QuadWeights q = quad_weights(pos, grid.inv_dx);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double wij = q.w[0][i] * q.w[1][j];
            size_t row = grid.index(q.base[0] + i, q.base[1] + j, q.base[2]);
            for (int k = 0; k < 3; ++k) mass[row + k] += wij * q.w[2][k] * pmass;
        }
}

struct GridArrays {
    double* m;
    double* x;
    double* y;
    double* z;
};

// Scatter one particle's mass and momentum. The affine matrix combines the
// stress term and the APIC contribution mass * C.
inline void p2g_one(const Particle& p, const SimConfig& cfg, const MpmGrid& grid,
                    GridArrays out) {
    QuadWeights q = quad_weights(p.position, grid.inv_dx);
    const double dx = grid.dx;
    const double pmass = cfg.particle_mass;

    Eigen::Matrix3d aff;
    if (p.material == Material::Rigid)
        aff.setZero();  // keyframed: carries momentum only
    else
        aff = stress_affine(p, cfg, grid.inv_dx) + pmass * p.affine;

    const double a00 = aff(0, 0), a01 = aff(0, 1), a02 = aff(0, 2);
    const double a10 = aff(1, 0), a11 = aff(1, 1), a12 = aff(1, 2);
    const double a20 = aff(2, 0), a21 = aff(2, 1), a22 = aff(2, 2);
    const double mvx = pmass * p.velocity[0];
    const double mvy = pmass * p.velocity[1];
    const double mvz = pmass * p.velocity[2];

    for (int i = 0; i < 3; ++i) {
        double dposx = (q.base[0] + i - q.xp[0]) * dx;
        double wi = q.w[0][i];
        for (int j = 0; j < 3; ++j) {
            double dposy = (q.base[1] + j - q.xp[1]) * dx;
            double wij = wi * q.w[1][j];
            double cx = a00 * dposx + a01 * dposy;
            double cy = a10 * dposx + a11 * dposy;
            double cz = a20 * dposx + a21 * dposy;
            size_t row = grid.index(q.base[0] + i, q.base[1] + j, q.base[2]);
            for (int k = 0; k < 3; ++k) {
                double dposz = (q.base[2] + k - q.xp[2]) * dx;
                double w = wij * q.w[2][k];
                size_t n = row + k;
                out.m[n] += w * pmass;
                out.x[n] += w * (mvx + cx + a02 * dposz);
                out.y[n] += w * (mvy + cy + a12 * dposz);
                out.z[n] += w * (mvz + cz + a22 * dposz);
            }
        }
    }
}

// Gather velocity and the APIC B matrix, then advect and update material
// state. Returns false when a non-finite value appears.
inline bool g2p_one(Particle& p, const SimConfig& cfg, const MpmGrid& grid) {
    QuadWeights q = quad_weights(p.position, grid.inv_dx);
    const double dx = grid.dx;

    double vx = 0, vy = 0, vz = 0;
    double b00 = 0, b01 = 0, b02 = 0, b10 = 0, b11 = 0, b12 = 0, b20 = 0, b21 = 0, b22 = 0;
    for (int i = 0; i < 3; ++i) {
        double dposx = (q.base[0] + i - q.xp[0]) * dx;
        double wi = q.w[0][i];
        for (int j = 0; j < 3; ++j) {
            double dposy = (q.base[1] + j - q.xp[1]) * dx;
            double wij = wi * q.w[1][j];
            size_t row = grid.index(q.base[0] + i, q.base[1] + j, q.base[2]);
            for (int k = 0; k < 3; ++k) {
                double dposz = (q.base[2] + k - q.xp[2]) * dx;
                double w = wij * q.w[2][k];
                size_t n = row + k;
                double gx = grid.vx[n], gy = grid.vy[n], gz = grid.vz[n];
                vx += w * gx;
                vy += w * gy;
                vz += w * gz;
                b00 += w * gx * dposx;
                b01 += w * gx * dposy;
                b02 += w * gx * dposz;
                b10 += w * gy * dposx;
                b11 += w * gy * dposy;
                b12 += w * gy * dposz;
                b20 += w * gz * dposx;
                b21 += w * gz * dposy;
                b22 += w * gz * dposz;
            }
        }
    }

    // Anti-tunneling clamp: at most `max_cells_per_substep` cells of travel.
    double vmax = cfg.max_cells_per_substep * dx / cfg.dt;
    double v2 = vx * vx + vy * vy + vz * vz;
    if (v2 > vmax * vmax) {
        double s = vmax / std::sqrt(v2);
        vx *= s;
        vy *= s;
        vz *= s;
    }

    p.velocity = {vx, vy, vz};
    double c4 = 4.0 * grid.inv_dx * grid.inv_dx;
    p.affine << c4 * b00, c4 * b01, c4 * b02, c4 * b10, c4 * b11, c4 * b12, c4 * b20, c4 * b21,
        c4 * b22;

    double lo = dynamic_lo(grid, cfg), hi = dynamic_hi(grid, cfg);
    for (int a = 0; a < 3; ++a)
        p.position[a] = std::clamp(p.position[a] + cfg.dt * p.velocity[a], lo, hi);

    // Deformation and plasticity.
    if (p.material == Material::Fluid) {
        Eigen::Matrix3d vel_grad = Eigen::Matrix3d::Identity() + cfg.dt * p.affine;
        double dj = std::clamp(vel_grad.determinant(), 0.1, 10.0);
        p.plastic_det = std::clamp(p.plastic_det * dj, 0.05, 20.0);
        p.def_grad = std::cbrt(p.plastic_det) * Eigen::Matrix3d::Identity();
        return p.position.allFinite() && p.velocity.allFinite();
    }
    if (p.material == Material::Snow || p.material == Material::Sand) {
        bool snow = p.material == Material::Snow;
        double clamp_lo = snow ? kSnowClampLo : kSandClampLo;
        double clamp_hi = snow ? kSnowClampHi : kSandClampHi;

        Eigen::Matrix3d f = (Eigen::Matrix3d::Identity() + cfg.dt * p.affine) * p.def_grad;
        // |sigma_i - 1| <= ||F - I||_F: when the bound keeps every singular
        // value strictly inside the clamp window, the projection is the
        // identity and only the cached rotation needs a (cheap) refresh.
        double dev = (f - Eigen::Matrix3d::Identity()).norm();
        double safe = 0.98 * std::min(clamp_hi - 1.0, 1.0 - clamp_lo);
        if (dev < safe) {
            p.def_grad = f;
            p.stress_rot = polar_rotation_warm(f, p.stress_rot);
        } else {
            Svd3 s = svd3(f);
            Eigen::Vector3d sig = s.sigma;
            double det_before = sig[0] * sig[1] * sig[2];
            for (int a = 0; a < 3; ++a) sig[a] = std::clamp(sig[a], clamp_lo, clamp_hi);
            double det_after = sig[0] * sig[1] * sig[2];
            p.def_grad = s.u * sig.asDiagonal() * s.v.transpose();
            if (snow)
                p.plastic_det = std::clamp(p.plastic_det * det_before / det_after,
                                           kHardeningJpLo, kHardeningJpHi);
            Eigen::Matrix3d u = s.u;
            if ((u * s.v.transpose()).determinant() < 0.0) u.col(2) = -u.col(2);
            p.stress_rot = u * s.v.transpose();
        }
        return p.position.allFinite() && p.velocity.allFinite();
    }
    return p.position.allFinite() && p.velocity.allFinite();
}

void ensure_static_cache(SimState& state, const SimConfig& cfg) {
    if (state.static_cache_valid) return;
    state.static_mass.assign(state.grid.mass.size(), 0.0);
    for (const Particle& p : state.particles)
        if (p.material == Material::Stationary)
            scatter_mass_only(p, cfg.particle_mass, state.grid, state.static_mass);
    state.static_mass_sum = 0.0;
    for (double m : state.static_mass) state.static_mass_sum += m;
    state.static_cache_valid = true;
}

void grid_update(MpmGrid& grid, const std::vector<double>& static_mass, const SimConfig& cfg,
                 int threads) {
    const int res = grid.res;
    const double gx = cfg.gravity[0] * cfg.dt;
    const double gy = cfg.gravity[1] * cfg.dt;
    const double gz = cfg.gravity[2] * cfg.dt;
    const double zero_frac = cfg.stationary_zero_fraction;

#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(static) if (threads > 1)
#endif
    for (int i = 0; i < res; ++i) {
        bool bx_lo = i < kBoundaryBand, bx_hi = i >= res - kBoundaryBand;
        for (int j = 0; j < res; ++j) {
            bool by_lo = j < kBoundaryBand, by_hi = j >= res - kBoundaryBand;
            size_t row = grid.index(i, j, 0);
            for (int k = 0; k < res; ++k) {
                size_t n = row + k;
                double m = grid.mass[n];
                if (m <= 0.0) continue;
                double inv_m = 1.0 / m;
                double vx = grid.vx[n] * inv_m + gx;
                double vy = grid.vy[n] * inv_m + gy;
                double vz = grid.vz[n] * inv_m + gz;
                // Nodes dominated by the static scene act as obstacles.
                if (static_mass[n] > zero_frac * m) {
                    vx = 0.0;
                    vy = 0.0;
                    vz = 0.0;
                }
                // Faces absorb outward motion only; inward motion passes,
                // otherwise the band under the ceiling would trap particles
                // emitted near the top plane.
                if (bx_lo) vx = std::max(vx, 0.0);
                if (bx_hi) vx = std::min(vx, 0.0);
                if (by_lo) vy = std::max(vy, 0.0);
                if (by_hi) vy = std::min(vy, 0.0);
                if (k < kBoundaryBand) vz = std::max(vz, 0.0);
                if (k >= res - kBoundaryBand) vz = std::min(vz, 0.0);
                grid.vx[n] = vx;
                grid.vy[n] = vy;
                grid.vz[n] = vz;
            }
        }
    }
}

void set_rigid_pose(SimState& state, const SimConfig& cfg, double frame_time) {
    if (!state.rigid_track) return;
    auto [pos, vel_per_frame] = keyframed_position(*state.rigid_track, frame_time);
    double frame_seconds = cfg.substeps * cfg.dt;
    Eigen::Vector3d vel = vel_per_frame / frame_seconds;
    double lo = dynamic_lo(state.grid, cfg), hi = dynamic_hi(state.grid, cfg);
    Eigen::Vector3d clamped = pos.cwiseMax(lo).cwiseMin(hi);
    for (uint32_t idx : state.active_idx) {
        Particle& p = state.particles[idx];
        if (p.material != Material::Rigid) continue;
        p.position = clamped;
        p.velocity = vel;
    }
}

}  // namespace

std::pair<Eigen::Vector3d, Eigen::Vector3d> keyframed_position(const KeyframeTrack& track,
                                                               double frame) {
    if (track.keys.size() < 2)
        fail("keyframed_position: need at least 2 keyframes, got ", track.keys.size());
    for (size_t i = 1; i < track.keys.size(); ++i)
        if (!(track.keys[i].first > track.keys[i - 1].first))
            fail("keyframed_position: keyframe frames must be strictly increasing (key ", i, ")");

    if (frame <= track.keys.front().first)
        return {track.keys.front().second, Eigen::Vector3d::Zero()};
    if (frame >= track.keys.back().first)
        return {track.keys.back().second, Eigen::Vector3d::Zero()};
    size_t hi = 1;
    while (track.keys[hi].first < frame) ++hi;
    const auto& [f0, p0] = track.keys[hi - 1];
    const auto& [f1, p1] = track.keys[hi];
    double u = (frame - f0) / (f1 - f0);
    Eigen::Vector3d vel = (p1 - p0) / (f1 - f0);  // units per frame
    return {p0 + u * (p1 - p0), vel};
}

std::vector<Particle> gaussians_to_stationary_particles(const GaussianScene& scene,
                                                        const SimTransform& transform) {
    MpmGrid ref;  // default resolution defines the clamp band
    double lo = stationary_lo(ref), hi = stationary_hi(ref);
    std::vector<Particle> out;
    out.reserve(scene.splats.size());
    for (const auto& s : scene.splats) {
        Particle p;
        p.material = Material::Stationary;
        p.position = transform.to_sim(s.position).cwiseMax(lo).cwiseMin(hi);
        p.frame_start_position = p.position;
        out.push_back(p);
    }
    return out;
}

std::vector<Particle> emit(const EmitterSpec& spec, int frame, uint64_t seed) {
    require(spec.period >= 1, "emit: period must be >= 1, got ", spec.period);
    require(spec.count >= 0, "emit: count must be >= 0, got ", spec.count);
    require(spec.region.valid(), "emit: emitter region is inverted");
    for (int a = 0; a < 3; ++a) {
        require(spec.region.lo[a] >= 0.0 && spec.region.hi[a] <= 1.0,
                "emit: emitter region leaves [0,1]^3 on axis ", a, " ([", spec.region.lo[a], ", ",
                spec.region.hi[a], "])");
        require(spec.jitter_min[a] <= spec.jitter_max[a],
                "emit: jitter_min > jitter_max on axis ", a);
    }
    require(spec.youngs_modulus > 0.0, "emit: Young's modulus must be positive");
    require(spec.poisson_ratio > 0.0 && spec.poisson_ratio < 0.5,
            "emit: Poisson ratio must lie in (0, 0.5)");

    std::vector<Particle> out;
    if (frame < 0 || frame >= spec.frame_budget || frame % spec.period != 0) return out;

    out.reserve(spec.count);
    Eigen::Vector3d ext = spec.region.extent();
    for (int i = 0; i < spec.count; ++i) {
        Rng rng(stream_key(seed, rng_salt::kEmit, static_cast<uint64_t>(frame),
                           static_cast<uint64_t>(i)));
        Particle p;
        p.material = spec.material;
        for (int a = 0; a < 3; ++a) p.position[a] = spec.region.lo[a] + rng.uniform() * ext[a];
        for (int a = 0; a < 3; ++a)
            p.velocity[a] =
                spec.base_velocity[a] + rng.uniform(spec.jitter_min[a], spec.jitter_max[a]);
        p.mu0 = lame_mu(spec.youngs_modulus, spec.poisson_ratio);
        p.lambda0 = lame_lambda(spec.youngs_modulus, spec.poisson_ratio);
        p.spawn_frame = frame;
        p.frame_start_position = p.position;
        out.push_back(p);
    }
    return out;
}

void add_particles(SimState& state, const SimConfig& cfg, std::vector<Particle> batch) {
    double slo = stationary_lo(state.grid), shi = stationary_hi(state.grid);
    double dlo = dynamic_lo(state.grid, cfg), dhi = dynamic_hi(state.grid, cfg);
    bool any_static = false;
    for (Particle& p : batch) {
        if (p.material == Material::Stationary) {
            p.position = p.position.cwiseMax(slo).cwiseMin(shi);
            any_static = true;
        } else {
            p.position = p.position.cwiseMax(dlo).cwiseMin(dhi);
        }
        p.frame_start_position = p.position;
        p.id = state.next_id++;
        state.particles.push_back(std::move(p));
    }
    if (any_static) state.static_cache_valid = false;
}

void step(SimState& state, const SimConfig& cfg) {
    require(cfg.dt > 0.0, "step: dt must be positive");
    require(cfg.substeps >= 1, "step: substeps must be >= 1");
    MpmGrid& grid = state.grid;

    ensure_static_cache(state, cfg);

    state.active_idx.clear();
    for (size_t i = 0; i < state.particles.size(); ++i) {
        const Particle& p = state.particles[i];
        if (p.active && p.material != Material::Stationary)
            state.active_idx.push_back(static_cast<uint32_t>(i));
    }

    int threads = cfg.threads;
#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#else
    threads = 1;  // no OpenMP: reference mode only
#endif
    threads = std::max(threads, 1);
    size_t node_count = grid.mass.size();
    // Parallel scatter uses one private grid per extra thread, merged in
    // thread order (fixed reduction order; declared tolerance 1e-6 against
    // the reference mode).
    std::vector<std::vector<double>> scratch;
    if (threads > 1)
        scratch.assign(static_cast<size_t>(threads - 1) * 4, std::vector<double>());

    size_t n_static = 0;
    for (const Particle& p : state.particles)
        if (p.material == Material::Stationary) ++n_static;

    for (int s = 0; s < cfg.substeps; ++s) {
        double t0 = state.frame + static_cast<double>(s) / cfg.substeps;
        set_rigid_pose(state, cfg, t0);

        double pm_total = 0.0, px = 0.0, py = 0.0, pz = 0.0, pvabs = 0.0;
        if (cfg.collect_stats) {
            pm_total = cfg.particle_mass * (static_cast<double>(n_static) +
                                            static_cast<double>(state.active_idx.size()));
            for (uint32_t idx : state.active_idx) {
                const Eigen::Vector3d& v = state.particles[idx].velocity;
                px += cfg.particle_mass * v[0];
                py += cfg.particle_mass * v[1];
                pz += cfg.particle_mass * v[2];
                pvabs += cfg.particle_mass * v.norm();
            }
        }

        // --- P2G ---
        std::memcpy(grid.mass.data(), state.static_mass.data(), node_count * sizeof(double));
        std::fill(grid.vx.begin(), grid.vx.end(), 0.0);
        std::fill(grid.vy.begin(), grid.vy.end(), 0.0);
        std::fill(grid.vz.begin(), grid.vz.end(), 0.0);

        if (threads == 1) {
            GridArrays main{grid.mass.data(), grid.vx.data(), grid.vy.data(), grid.vz.data()};
            for (uint32_t idx : state.active_idx) p2g_one(state.particles[idx], cfg, grid, main);
        } else {
#ifdef _OPENMP
            size_t n_active = state.active_idx.size();
            size_t chunk = (n_active + threads - 1) / threads;
#pragma omp parallel num_threads(threads)
            {
                int t = omp_get_thread_num();
                GridArrays dst;
                if (t == 0) {
                    dst = {grid.mass.data(), grid.vx.data(), grid.vy.data(), grid.vz.data()};
                } else {
                    for (int a = 0; a < 4; ++a) scratch[(t - 1) * 4 + a].assign(node_count, 0.0);
                    dst = {scratch[(t - 1) * 4 + 0].data(), scratch[(t - 1) * 4 + 1].data(),
                           scratch[(t - 1) * 4 + 2].data(), scratch[(t - 1) * 4 + 3].data()};
                }
                size_t lo = std::min(static_cast<size_t>(t) * chunk, n_active);
                size_t hi = std::min(lo + chunk, n_active);
                for (size_t i = lo; i < hi; ++i)
                    p2g_one(state.particles[state.active_idx[i]], cfg, grid, dst);
#pragma omp barrier
#pragma omp for schedule(static)
                for (int64_t n = 0; n < static_cast<int64_t>(node_count); ++n) {
                    for (int other = 1; other < threads; ++other) {
                        grid.mass[n] += scratch[(other - 1) * 4 + 0][n];
                        grid.vx[n] += scratch[(other - 1) * 4 + 1][n];
                        grid.vy[n] += scratch[(other - 1) * 4 + 2][n];
                        grid.vz[n] += scratch[(other - 1) * 4 + 3][n];
                    }
                }
            }
#endif
        }

        if (cfg.collect_stats) {
            double gm = 0.0, gx = 0.0, gy = 0.0, gz = 0.0;
            for (size_t n = 0; n < node_count; ++n) {
                gm += grid.mass[n];
                gx += grid.vx[n];
                gy += grid.vy[n];
                gz += grid.vz[n];
            }
            double mass_err = std::abs(gm - pm_total) / std::max(pm_total, 1e-30);
            double mom_err = std::sqrt((gx - px) * (gx - px) + (gy - py) * (gy - py) +
                                       (gz - pz) * (gz - pz)) /
                             std::max(pvabs, 1e-30);
            state.stats.max_mass_err = std::max(state.stats.max_mass_err, mass_err);
            state.stats.max_momentum_err = std::max(state.stats.max_momentum_err, mom_err);
            ++state.stats.substeps_measured;
        }

        grid_update(grid, state.static_mass, cfg, threads);

        // --- G2P ---
        double t1 = state.frame + static_cast<double>(s + 1) / cfg.substeps;
        bool ok = true;
        if (threads == 1) {
            for (uint32_t idx : state.active_idx) {
                Particle& p = state.particles[idx];
                if (p.material == Material::Rigid) continue;
                ok &= g2p_one(p, cfg, grid);
            }
        } else {
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(static) reduction(&& : ok)
            for (int64_t i = 0; i < static_cast<int64_t>(state.active_idx.size()); ++i) {
                Particle& p = state.particles[state.active_idx[i]];
                if (p.material == Material::Rigid) continue;
                ok = ok && g2p_one(p, cfg, grid);
            }
#endif
        }
        set_rigid_pose(state, cfg, t1);

        if (!ok) {
            for (uint32_t idx : state.active_idx) {
                const Particle& p = state.particles[idx];
                if (!p.position.allFinite() || !p.velocity.allFinite())
                    fail("simulation diverged: non-finite state at frame ", state.frame,
                         ", particle id ", p.id, " (", material_name(p.material), ")");
            }
        }
    }
    ++state.frame;
}

std::vector<CollisionEvent> update_active_flags(SimState& state, const SimConfig& cfg) {
    std::vector<CollisionEvent> events;
    double lo = -cfg.domain_margin, hi = 1.0 + cfg.domain_margin;
    for (Particle& p : state.particles) {
        if (!p.active) continue;
        if (p.material == Material::Stationary || p.material == Material::Rigid) continue;

        bool in_domain = (p.position.array() >= lo).all() && (p.position.array() <= hi).all();
        if (!in_domain) {
            p.active = false;  // left Ω: gone, no event
            continue;
        }
        double moved = (p.position - p.frame_start_position).norm();
        bool grace = (p.material == Material::Snow || p.material == Material::Sand) &&
                     (state.frame - p.spawn_frame) <= cfg.spawn_grace_frames;
        if (moved < cfg.inactivity_threshold && !grace) {
            p.active = false;
            events.push_back({p.id, state.frame - 1, p.position,
                              rotation_from_deformation(p.def_grad, cfg.strict_paper_rotation)});
        } else {
            p.frame_start_position = p.position;
        }
    }
    return events;
}

Eigen::Quaterniond rotation_from_deformation(const Eigen::Matrix3d& f, bool strict_paper) {
    double det = f.determinant();
    if (std::abs(det) < 1e-12)
        fail("rotation_from_deformation: singular deformation gradient (det = ", det, ")");
    Eigen::Matrix3d r = polar_rotation(f);
    if (strict_paper) r.transposeInPlace();  // V Uᵀ, the transposed convention
    return quaternion_from_matrix(r);
}

}  // namespace gsw
