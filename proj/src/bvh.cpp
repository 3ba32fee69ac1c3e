#include "gsw/bvh.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

#include "gsw/error.hpp"

namespace gsw {

Eigen::Vector3d closest_point_on_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                          const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                                          Eigen::Vector3d* barycentric) {
    // Region-based closest point (Ericson, Real-Time Collision Detection §5.1.5).
    auto bary_out = [&](double u, double v, double w, const Eigen::Vector3d& q) {
        if (barycentric) *barycentric = {u, v, w};
        return q;
    };

    Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return bary_out(1, 0, 0, a);

    Eigen::Vector3d bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return bary_out(0, 1, 0, b);

    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        double v = d1 / (d1 - d3);
        return bary_out(1 - v, v, 0, a + v * ab);
    }

    Eigen::Vector3d cp = p - c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return bary_out(0, 0, 1, c);

    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        double w = d2 / (d2 - d6);
        return bary_out(1 - w, 0, w, a + w * ac);
    }

    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return bary_out(0, 1 - w, w, b + w * (c - b));
    }

    double denom = 1.0 / (va + vb + vc);
    double v = vb * denom, w = vc * denom;
    return bary_out(1 - v - w, v, w, a + ab * v + ac * w);
}

Bvh::Bvh(const TriangleMesh& mesh) {
    mesh_.vertices = mesh.vertices;
    for (const auto& f : mesh.faces) {
        Eigen::Vector3d n = (mesh.vertices[f[1]] - mesh.vertices[f[0]])
                                .cross(mesh.vertices[f[2]] - mesh.vertices[f[0]]);
        double len = n.norm();
        if (len <= 0.0) continue;  // zero-area: no surface, no normal
        mesh_.faces.push_back(f);
        face_normals_.push_back(n / len);
    }
    if (mesh_.faces.empty()) fail("bvh: mesh has no non-degenerate triangles");

    // Angle-weighted vertex normals.
    vertex_normals_.assign(mesh_.vertices.size(), Eigen::Vector3d::Zero());
    for (size_t t = 0; t < mesh_.faces.size(); ++t) {
        const auto& f = mesh_.faces[t];
        for (int k = 0; k < 3; ++k) {
            Eigen::Vector3d e1 = (mesh_.vertices[f[(k + 1) % 3]] - mesh_.vertices[f[k]]).normalized();
            Eigen::Vector3d e2 = (mesh_.vertices[f[(k + 2) % 3]] - mesh_.vertices[f[k]]).normalized();
            double angle = std::acos(std::clamp(e1.dot(e2), -1.0, 1.0));
            vertex_normals_[f[k]] += angle * face_normals_[t];
        }
    }
    for (auto& n : vertex_normals_) {
        double len = n.norm();
        n = len > 1e-12 ? Eigen::Vector3d(n / len) : Eigen::Vector3d::UnitY();
    }

    tri_order_.resize(mesh_.faces.size());
    for (size_t i = 0; i < tri_order_.size(); ++i) tri_order_[i] = static_cast<int>(i);
    std::vector<Eigen::Vector3d> centroids(mesh_.faces.size());
    for (size_t t = 0; t < mesh_.faces.size(); ++t) {
        const auto& f = mesh_.faces[t];
        centroids[t] =
            (mesh_.vertices[f[0]] + mesh_.vertices[f[1]] + mesh_.vertices[f[2]]) / 3.0;
    }
    nodes_.reserve(2 * mesh_.faces.size());
    build_range(0, static_cast<int>(tri_order_.size()), centroids);
}

int Bvh::build_range(int first, int count, std::vector<Eigen::Vector3d>& centroids) {
    int node_idx = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    Aabb box, cbox;
    for (int i = first; i < first + count; ++i) {
        const auto& f = mesh_.faces[tri_order_[i]];
        for (int k = 0; k < 3; ++k) box.expand(mesh_.vertices[f[k]]);
        cbox.expand(centroids[tri_order_[i]]);
    }
    nodes_[node_idx].box = box;

    constexpr int kLeafSize = 4;
    if (count <= kLeafSize) {
        nodes_[node_idx].first = first;
        nodes_[node_idx].count = count;
        return node_idx;
    }

    int axis = 0;
    Eigen::Vector3d cext = cbox.extent();
    if (cext[1] > cext[axis]) axis = 1;
    if (cext[2] > cext[axis]) axis = 2;
    // Median split; total order (centroid, index) keeps builds reproducible.
    std::sort(tri_order_.begin() + first, tri_order_.begin() + first + count,
              [&](int a, int b) {
                  return centroids[a][axis] != centroids[b][axis]
                             ? centroids[a][axis] < centroids[b][axis]
                             : a < b;
              });
    int half = count / 2;
    int left = build_range(first, half, centroids);
    int right = build_range(first + half, count - half, centroids);
    nodes_[node_idx].left = left;
    nodes_[node_idx].right = right;
    return node_idx;
}

SurfaceHit Bvh::closest_point(const Eigen::Vector3d& query) const {
    double best_d2 = std::numeric_limits<double>::max();
    int best_tri = -1;

    int stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (node.box.distance_sq(query) > best_d2) continue;
        if (node.leaf()) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                int tri = tri_order_[i];
                const auto& f = mesh_.faces[tri];
                Eigen::Vector3d q = closest_point_on_triangle(
                    query, mesh_.vertices[f[0]], mesh_.vertices[f[1]], mesh_.vertices[f[2]]);
                double d2 = (query - q).squaredNorm();
                if (d2 < best_d2 || (d2 == best_d2 && tri < best_tri)) {
                    best_d2 = d2;
                    best_tri = tri;
                }
            }
        } else {
            // Visit the nearer child first for tighter pruning.
            double dl = nodes_[node.left].box.distance_sq(query);
            double dr = nodes_[node.right].box.distance_sq(query);
            int near = dl <= dr ? node.left : node.right;
            int far = dl <= dr ? node.right : node.left;
            stack[top++] = far;
            stack[top++] = near;
        }
    }

    const auto& f = mesh_.faces[best_tri];
    SurfaceHit hit;
    hit.triangle = best_tri;
    Eigen::Vector3d bary;
    hit.point = closest_point_on_triangle(query, mesh_.vertices[f[0]], mesh_.vertices[f[1]],
                                          mesh_.vertices[f[2]], &bary);
    hit.distance = (query - hit.point).norm();

    // Face normal on triangle interiors; angle-weighted vertex normals
    // blended barycentrically on edges and vertices, where the face normal
    // alone would be discontinuous.
    constexpr double kInteriorEps = 1e-9;
    if (bary.minCoeff() > kInteriorEps) {
        hit.normal = face_normals_[best_tri];
    } else {
        Eigen::Vector3d n = bary[0] * vertex_normals_[f[0]] + bary[1] * vertex_normals_[f[1]] +
                            bary[2] * vertex_normals_[f[2]];
        double len = n.norm();
        hit.normal = len > 1e-12 ? Eigen::Vector3d(n / len) : face_normals_[best_tri];
    }
    return hit;
}

}  // namespace gsw
