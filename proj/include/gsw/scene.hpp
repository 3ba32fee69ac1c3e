#pragma once

#include <span>
#include <vector>

#include "gsw/aabb.hpp"
#include "gsw/gaussian.hpp"

namespace gsw {

// A loaded splat scene. Per-splat spherical harmonics are stored as one
// flat array (splat-major, then channel-major within a splat) so the common
// render path can stream them without pointer chasing; `splats[i].rgb`
// caches the view-independent DC color as a fallback.
struct GaussianScene {
    std::vector<GaussianSplat> splats;
    int sh_degree = 0;
    std::vector<double> sh;  // size = splats.size() * 3 * sh_coeff_count(sh_degree)

    // Axis-aligned bounds of splat centers, computed at load time.
    Aabb bounds;

    int coeffs_per_splat() const { return 3 * sh_coeff_count(sh_degree); }

    std::span<const double> sh_for(size_t i) const {
        int n = coeffs_per_splat();
        return std::span<const double>(sh.data() + i * n, n);
    }

    void recompute_bounds() {
        bounds = Aabb();
        for (const auto& s : splats) bounds.expand(s.position);
    }
};

}  // namespace gsw
