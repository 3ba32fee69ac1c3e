#pragma once

#include <Eigen/Core>
#include <vector>

#include "gsw/aabb.hpp"
#include "gsw/mesh.hpp"

namespace gsw {

struct SurfaceHit {
    Eigen::Vector3d point{0, 0, 0};   // closest point on the mesh
    Eigen::Vector3d normal{0, 1, 0};  // unit; angle-weighted at edges/vertices
    double distance = 0.0;            // |query - point|
    int triangle = -1;                // winning triangle (lowest index on ties)
};

// Static bounding-volume hierarchy over mesh triangles for closest-point
// queries. Immutable after build; concurrent read-only queries are safe.
//
// Determinism: equidistant candidate triangles are resolved toward the
// lowest triangle index, independent of traversal order.
class Bvh {
public:
    // Throws gsw::Error on a mesh with no usable (non-zero-area) triangles.
    // Zero-area triangles are dropped: they contribute no surface and have
    // no normal. Vertex normals are angle-weighted face-normal averages.
    explicit Bvh(const TriangleMesh& mesh);

    SurfaceHit closest_point(const Eigen::Vector3d& query) const;

    const TriangleMesh& mesh() const { return mesh_; }
    const std::vector<Eigen::Vector3d>& vertex_normals() const { return vertex_normals_; }
    Aabb bounds() const { return nodes_.empty() ? Aabb{} : nodes_[0].box; }

private:
    struct Node {
        Aabb box;
        int left = -1;          // internal: child indices
        int right = -1;
        int first = 0, count = 0;  // leaf: range in tri_order_
        bool leaf() const { return left < 0; }
    };

    int build_range(int first, int count, std::vector<Eigen::Vector3d>& centroids);

    TriangleMesh mesh_;  // owned copy with degenerate faces removed
    std::vector<Eigen::Vector3d> face_normals_;
    std::vector<Eigen::Vector3d> vertex_normals_;
    std::vector<int> tri_order_;  // leaf ranges index into this
    std::vector<Node> nodes_;
};

// Closest point on one triangle (a, b, c) to p, with barycentric
// coordinates of the result. Exposed for the brute-force test oracle.
Eigen::Vector3d closest_point_on_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                          const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                                          Eigen::Vector3d* barycentric = nullptr);

}  // namespace gsw
