#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsw/collision.hpp"
#include "gsw/gaussian.hpp"

namespace gsw {

// Everything the renderer needs for one simulated frame, in world units:
// the live dynamic splats, the splats frozen onto the mesh so far, and (for
// rain) the wetness field. `active_particles` is the simulation census at
// the end of the frame.
struct FrameState {
    int frame = 0;
    uint64_t active_particles = 0;
    std::vector<GaussianSplat> dynamic_splats;
    std::vector<AccumulatedSplat> accumulated;
    std::optional<WetnessGrid> wetness;
};

// Versioned little-endian binary container; reload reproduces the state
// bitwise. Errors carry the path (and what was being read).
void write_frame_state(const FrameState& state, const std::string& path);
FrameState read_frame_state(const std::string& path);

}  // namespace gsw
