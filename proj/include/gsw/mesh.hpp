#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "gsw/aabb.hpp"
#include "gsw/sim_transform.hpp"

namespace gsw {

struct TriangleMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> faces;

    Aabb bounds() const {
        Aabb b;
        for (const auto& v : vertices) b.expand(v);
        return b;
    }

    void apply(const SimTransform& t) {
        for (auto& v : vertices) v = t.to_sim(v);
    }
};

// Loads a triangle mesh from .obj (v/f directives, polygons fan-
// triangulated) or .ply (vertex + face elements). Throws gsw::Error with
// file and line/row context on malformed input, out-of-range indices, or a
// mesh with no faces.
TriangleMesh load_mesh(const std::string& path);

}  // namespace gsw
