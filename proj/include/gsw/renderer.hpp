#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gsw/camera.hpp"
#include "gsw/gaussian.hpp"

namespace gsw {

// A splat after perspective projection: pixel-space mean, conic (inverse of
// the low-pass-filtered 2D covariance), camera depth, flat color, and the
// binning radius (3 sigma of the widest axis).
struct Projected2DSplat {
    double mean_x = 0, mean_y = 0;
    double conic_a = 1, conic_b = 0, conic_c = 1;
    double depth = 0;
    double opacity = 0;
    Eigen::Vector3d rgb{0, 0, 0};
    double radius = 0;
    uint32_t id = 0;  // index into the input list; depth-sort tiebreak
};

// Contribution of a projected splat at a pixel center. One shared
// definition so the tile renderer and any reference implementation walk
// bit-identical arithmetic: evaluation is cut off outside the 3-sigma
// ellipse (q > 9), matching the binning footprint exactly.
inline double alpha_at(const Projected2DSplat& s, double px, double py) {
    double dx = px - s.mean_x, dy = py - s.mean_y;
    double q = s.conic_a * dx * dx + 2.0 * s.conic_b * dx * dy + s.conic_c * dy * dy;
    if (q > 9.0) return 0.0;
    return std::min(s.opacity * std::exp(-0.5 * q), 0.99);
}

inline constexpr double kAlphaSkip = 1.0 / 255.0;   // below this a splat is skipped
inline constexpr double kTransmittanceStop = 1e-4;  // early termination threshold

struct FrameImage {
    int width = 0, height = 0;
    std::vector<double> data;  // row-major RGB in [0,1]

    FrameImage() = default;
    FrameImage(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h * 3, 0.0) {}
    double* pixel(int x, int y) { return data.data() + 3 * (static_cast<size_t>(y) * width + x); }
    const double* pixel(int x, int y) const {
        return data.data() + 3 * (static_cast<size_t>(y) * width + x);
    }
};

struct RenderOptions {
    Eigen::Vector3d background{0, 0, 0};
    double near_plane = 0.01;
    int tile_size = 16;
    int threads = 1;  // <= 0: use all hardware threads
};

// EWA projection of one splat: camera-frame covariance pushed through the
// perspective Jacobian (frustum-clamped), plus a 0.3 px^2 low-pass. Returns
// nothing when the center is behind the near plane or the 3-sigma footprint
// misses the screen. `id` is echoed into the result.
std::optional<Projected2DSplat> project_splat(const GaussianSplat& splat, const CameraSpec& cam,
                                              double near_plane = 0.01, uint32_t id = 0);

// Tile-based forward rendering: front-to-back alpha blending in double
// precision, depth sorted with index tiebreak, early termination, black --
// or configured -- background. Bitwise deterministic for fixed inputs
// regardless of thread count; pixel centers sit at (x+0.5, y+0.5).
FrameImage render(std::span<const GaussianSplat> splats, const CameraSpec& cam,
                  const RenderOptions& opts = {});

}  // namespace gsw
