#pragma once

#include <string>

#include "gsw/scene.hpp"

namespace gsw {

// Loads a splat scene from the standard splat PLY layout: positions,
// f_dc_* / f_rest_* spherical-harmonic coefficients (channel-major rest
// block), opacity, per-axis scales, and a (w, x, y, z) quaternion.
//
// With `apply_activations` (the default, matching training checkpoints)
// scales are stored as logs and opacity as a logit; loading applies exp and
// the logistic sigmoid. Pass false for assets authored with plain
// already-activated values, where scales must be strictly positive and
// opacity must lie in [0, 1].
//
// Throws gsw::Error on malformed headers, missing properties, non-finite
// values (named by splat index and property), zero quaternions, or an empty
// scene.
GaussianScene load_gaussian_ply(const std::string& path, bool apply_activations = true);

// Inverse of load_gaussian_ply(path, true): writes binary little-endian PLY
// with log scales and logit opacity, so standard viewers accept the output.
// Opacity is clamped to [1e-7, 1 - 1e-7] before the logit. Scenes without a
// spherical-harmonic block are written as degree 0 with f_dc derived from
// the flat color.
void save_gaussian_ply(const GaussianScene& scene, const std::string& path);

}  // namespace gsw
