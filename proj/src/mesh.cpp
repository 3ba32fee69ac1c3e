#include "gsw/mesh.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gsw/error.hpp"
#include "ply_detail.hpp"

namespace gsw {

namespace {

TriangleMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open mesh file '", path, "'");

    TriangleMesh mesh;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Eigen::Vector3d v;
            if (!(ls >> v.x() >> v.y() >> v.z()))
                fail("obj '", path, "' line ", lineno, ": malformed vertex '", line, "'");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            // Indices may appear as i, i/t, i//n or i/t/n; only the vertex
            // index matters here. Negative indices count from the end.
            std::vector<int> poly;
            std::string word;
            while (ls >> word) {
                int idx = std::atoi(word.c_str());
                if (idx == 0)
                    fail("obj '", path, "' line ", lineno, ": bad face index '", word, "'");
                if (idx < 0) idx = static_cast<int>(mesh.vertices.size()) + idx + 1;
                if (idx < 1 || idx > static_cast<int>(mesh.vertices.size()))
                    fail("obj '", path, "' line ", lineno, ": face index ", idx,
                         " out of range (", mesh.vertices.size(), " vertices so far)");
                poly.push_back(idx - 1);
            }
            if (poly.size() < 3)
                fail("obj '", path, "' line ", lineno, ": face with ", poly.size(), " vertices");
            for (size_t k = 2; k < poly.size(); ++k)
                mesh.faces.push_back({poly[0], poly[k - 1], poly[k]});
        }
        // vt, vn, usemtl, o, g, s, mtllib: irrelevant for collision geometry.
    }
    return mesh;
}

TriangleMesh load_ply_mesh(const std::string& path) {
    auto ply = plydetail::Parser::open(path);
    const auto& vertex = ply.element("vertex");
    const auto& face = ply.element("face");

    int ix = vertex.prop_index("x"), iy = vertex.prop_index("y"), iz = vertex.prop_index("z");
    if (ix < 0 || iy < 0 || iz < 0)
        fail("ply '", path, "': vertex element lacks x/y/z properties");

    TriangleMesh mesh;
    mesh.vertices.resize(vertex.count);
    ply.scan_scalars(vertex, [&](size_t row, const double* v) {
        mesh.vertices[row] = {v[ix], v[iy], v[iz]};
    });

    ply.scan_lists(face, [&](size_t row, const std::vector<int64_t>& items) {
        if (items.size() < 3)
            fail("ply '", path, "': face ", row, " has ", items.size(), " indices");
        for (const int64_t idx : items)
            if (idx < 0 || idx >= static_cast<int64_t>(mesh.vertices.size()))
                fail("ply '", path, "': face ", row, " index ", idx, " out of range (",
                     mesh.vertices.size(), " vertices)");
        for (size_t k = 2; k < items.size(); ++k)
            mesh.faces.push_back({static_cast<int>(items[0]), static_cast<int>(items[k - 1]),
                                  static_cast<int>(items[k])});
    });
    return mesh;
}

}  // namespace

TriangleMesh load_mesh(const std::string& path) {
    TriangleMesh mesh;
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".obj")
        mesh = load_obj(path);
    else if (ext == ".ply")
        mesh = load_ply_mesh(path);
    else
        fail("unsupported mesh format '", ext, "' for '", path, "' (expected .obj or .ply)");

    if (mesh.faces.empty()) fail("mesh '", path, "' has no faces");
    for (const auto& v : mesh.vertices)
        if (!v.allFinite()) fail("mesh '", path, "' contains non-finite vertex coordinates");
    return mesh;
}

}  // namespace gsw
