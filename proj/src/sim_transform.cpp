#include "gsw/sim_transform.hpp"

#include <algorithm>

#include "gsw/error.hpp"

namespace gsw {

SimTransform compute_normalization(const Aabb& world_bounds) {
    if (!world_bounds.valid())
        fail("compute_normalization: invalid bounds (empty scene?)");
    Eigen::Vector3d ext = world_bounds.extent();
    double max_extent = ext.maxCoeff();
    if (!(max_extent > 0.0))
        fail("compute_normalization: degenerate bounds, max extent ", max_extent);

    SimTransform t;
    t.scale = 1.0 / max_extent;
    // Center x and z; rest the lowest point on the ground height, backing
    // off just enough to keep the top inside the cube for tall scenes.
    for (int a : {0, 2})
        t.translation[a] = 0.5 * (1.0 - t.scale * ext[a]) - t.scale * world_bounds.lo[a];
    t.translation[1] = std::min(kSimGroundHeight - t.scale * world_bounds.lo[1],
                                1.0 - t.scale * world_bounds.hi[1]);
    return t;
}

}  // namespace gsw
