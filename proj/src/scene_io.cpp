#include "gsw/scene_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "gsw/error.hpp"
#include "ply_detail.hpp"

namespace gsw {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double y) { return std::log(y / (1.0 - y)); }

int degree_for_rest_count(int rest, const std::string& path) {
    switch (rest) {
        case 0: return 0;
        case 9: return 1;
        case 24: return 2;
        case 45: return 3;
    }
    fail("ply '", path, "': unsupported f_rest property count ", rest,
         " (expected 0, 9, 24 or 45)");
}

}  // namespace

GaussianScene load_gaussian_ply(const std::string& path, bool apply_activations) {
    auto ply = plydetail::Parser::open(path);
    const auto& vertex = ply.element("vertex");
    if (vertex.count == 0) fail("ply '", path, "': scene has no splats");

    auto need = [&](const std::string& name) {
        int i = vertex.prop_index(name);
        if (i < 0) fail("ply '", path, "': missing required vertex property '", name, "'");
        return i;
    };
    int ix = need("x"), iy = need("y"), iz = need("z");
    int iop = need("opacity");
    int isc[3] = {need("scale_0"), need("scale_1"), need("scale_2")};
    int irot[4] = {need("rot_0"), need("rot_1"), need("rot_2"), need("rot_3")};
    int idc[3] = {need("f_dc_0"), need("f_dc_1"), need("f_dc_2")};

    // f_rest_* must be a contiguous run starting at 0.
    int rest_count = 0;
    while (vertex.prop_index("f_rest_" + std::to_string(rest_count)) >= 0) ++rest_count;
    std::vector<int> irest(rest_count);
    for (int i = 0; i < rest_count; ++i) irest[i] = vertex.prop_index("f_rest_" + std::to_string(i));

    GaussianScene scene;
    scene.sh_degree = degree_for_rest_count(rest_count, path);
    int n_coeff = sh_coeff_count(scene.sh_degree);
    int per_channel_rest = n_coeff - 1;
    scene.splats.resize(vertex.count);
    scene.sh.resize(vertex.count * 3 * n_coeff);

    std::string bad_prop;
    size_t bad_row = 0;
    ply.scan_scalars(vertex, [&](size_t row, const double* v) {
        if (!bad_prop.empty()) return;
        auto check = [&](double x, const char* name) {
            if (!std::isfinite(x) && bad_prop.empty()) {
                bad_prop = name;
                bad_row = row;
            }
            return x;
        };
        GaussianSplat& s = scene.splats[row];
        s.position = {check(v[ix], "x"), check(v[iy], "y"), check(v[iz], "z")};

        double rawop = check(v[iop], "opacity");
        if (apply_activations) {
            s.opacity = sigmoid(rawop);
        } else {
            s.opacity = rawop;
            if (bad_prop.empty() && (rawop < 0.0 || rawop > 1.0))
                fail("ply '", path, "': splat ", row, " opacity ", rawop,
                     " outside [0, 1] (activations disabled)");
        }
        for (int a = 0; a < 3; ++a) {
            double raw = check(v[isc[a]], "scale");
            if (apply_activations) {
                s.scale[a] = std::exp(raw);
            } else {
                s.scale[a] = raw;
                if (bad_prop.empty() && !(raw > 0.0))
                    fail("ply '", path, "': splat ", row, " scale_", a, " = ", raw,
                         " must be strictly positive (activations disabled)");
            }
        }
        Eigen::Quaterniond q(check(v[irot[0]], "rot_0"), check(v[irot[1]], "rot_1"),
                             check(v[irot[2]], "rot_2"), check(v[irot[3]], "rot_3"));
        double qn = q.norm();
        if (bad_prop.empty() && qn < 1e-12)
            fail("ply '", path, "': splat ", row, " has a zero quaternion");
        s.rotation = Eigen::Quaterniond(q.coeffs() / qn);

        double* coeffs = scene.sh.data() + row * 3 * n_coeff;
        for (int c = 0; c < 3; ++c) {
            coeffs[c * n_coeff] = check(v[idc[c]], "f_dc");
            for (int j = 0; j < per_channel_rest; ++j)
                coeffs[c * n_coeff + 1 + j] = check(v[irest[c * per_channel_rest + j]], "f_rest");
        }
        // DC-only color as the flat fallback (direction-independent).
        double dc[3] = {coeffs[0], coeffs[n_coeff], coeffs[2 * n_coeff]};
        s.rgb = evaluate_sh(0, std::span<const double>(dc, 3), Eigen::Vector3d::UnitZ());
    });
    if (!bad_prop.empty())
        fail("ply '", path, "': splat ", bad_row, " has a non-finite value in property '",
             bad_prop, "'");

    scene.recompute_bounds();
    return scene;
}

void save_gaussian_ply(const GaussianScene& scene, const std::string& path) {
    if (scene.splats.empty()) fail("save_gaussian_ply: refusing to write an empty scene");
    int n_coeff = sh_coeff_count(scene.sh_degree);
    int rest = (n_coeff - 1) * 3;
    bool has_sh = !scene.sh.empty();
    if (has_sh && scene.sh.size() != scene.splats.size() * static_cast<size_t>(3 * n_coeff))
        fail("save_gaussian_ply: sh block size ", scene.sh.size(), " does not match ",
             scene.splats.size(), " splats at degree ", scene.sh_degree);

    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot open '", path, "' for writing");

    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << scene.splats.size() << "\n";
    for (const char* n : {"x", "y", "z", "nx", "ny", "nz"}) out << "property float " << n << "\n";
    for (int i = 0; i < 3; ++i) out << "property float f_dc_" << i << "\n";
    for (int i = 0; i < rest; ++i) out << "property float f_rest_" << i << "\n";
    out << "property float opacity\n";
    for (int i = 0; i < 3; ++i) out << "property float scale_" << i << "\n";
    for (int i = 0; i < 4; ++i) out << "property float rot_" << i << "\n";
    out << "end_header\n";

    constexpr double kShC0 = 0.28209479177387814;
    // Row layout: pos 3 + normals 3 + dc 3 + rest (3n-3) + opacity 1 +
    // scale 3 + rot 4 = 14 + 3n floats, matching the header exactly.
    std::vector<float> row(14 + 3 * n_coeff);
    for (size_t i = 0; i < scene.splats.size(); ++i) {
        const GaussianSplat& s = scene.splats[i];
        float* w = row.data();
        for (int a = 0; a < 3; ++a) *w++ = static_cast<float>(s.position[a]);
        for (int a = 0; a < 3; ++a) *w++ = 0.0f;  // normals, unused
        if (has_sh) {
            const double* coeffs = scene.sh.data() + i * 3 * n_coeff;
            for (int c = 0; c < 3; ++c) *w++ = static_cast<float>(coeffs[c * n_coeff]);
            for (int c = 0; c < 3; ++c)
                for (int j = 1; j < n_coeff; ++j) *w++ = static_cast<float>(coeffs[c * n_coeff + j]);
        } else {
            for (int c = 0; c < 3; ++c) *w++ = static_cast<float>((s.rgb[c] - 0.5) / kShC0);
            for (int j = 0; j < rest; ++j) *w++ = 0.0f;
        }
        double op = std::clamp(s.opacity, 1e-7, 1.0 - 1e-7);
        *w++ = static_cast<float>(logit(op));
        for (int a = 0; a < 3; ++a) {
            if (!(s.scale[a] > 0.0))
                fail("save_gaussian_ply: splat ", i, " scale_", a, " = ", s.scale[a],
                     " must be strictly positive");
            *w++ = static_cast<float>(std::log(s.scale[a]));
        }
        *w++ = static_cast<float>(s.rotation.w());
        *w++ = static_cast<float>(s.rotation.x());
        *w++ = static_cast<float>(s.rotation.y());
        *w++ = static_cast<float>(s.rotation.z());
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) fail("write failed for '", path, "'");
}

}  // namespace gsw
