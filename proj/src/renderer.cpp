#include "gsw/renderer.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <numeric>

#include "gsw/error.hpp"

namespace gsw {

std::optional<Projected2DSplat> project_splat(const GaussianSplat& splat, const CameraSpec& cam,
                                              double near_plane, uint32_t id) {
    Eigen::Vector3d p = cam.rotation * splat.position + cam.translation;
    if (!(p.z() > near_plane)) return std::nullopt;

    double inv_z = 1.0 / p.z();
    double mx = cam.fx * p.x() * inv_z + cam.cx;
    double my = cam.fy * p.y() * inv_z + cam.cy;

    // Frustum-clamped perspective Jacobian (the usual EWA guard against
    // exploding tangents at the image border).
    double tan_half_x = 0.5 * cam.width / cam.fx;
    double tan_half_y = 0.5 * cam.height / cam.fy;
    double tx = std::clamp(p.x() * inv_z, -1.3 * tan_half_x, 1.3 * tan_half_x);
    double ty = std::clamp(p.y() * inv_z, -1.3 * tan_half_y, 1.3 * tan_half_y);
    Eigen::Matrix<double, 2, 3> j;
    j << cam.fx * inv_z, 0.0, -cam.fx * tx * inv_z, 0.0, cam.fy * inv_z, -cam.fy * ty * inv_z;

    Eigen::Matrix3d cov_cam =
        cam.rotation * covariance_from(splat.rotation, splat.scale) * cam.rotation.transpose();
    Eigen::Matrix2d cov2 = j * cov_cam * j.transpose();
    cov2(0, 0) += 0.3;  // low-pass: every splat covers at least ~a pixel
    cov2(1, 1) += 0.3;

    double det = cov2(0, 0) * cov2(1, 1) - cov2(0, 1) * cov2(0, 1);
    if (!(det > 0.0) || !std::isfinite(det)) return std::nullopt;

    double mid = 0.5 * (cov2(0, 0) + cov2(1, 1));
    double lambda_max = mid + std::sqrt(std::max(0.0, mid * mid - det));
    double radius = 3.0 * std::sqrt(lambda_max);

    if (mx + radius < 0.0 || mx - radius > cam.width || my + radius < 0.0 ||
        my - radius > cam.height)
        return std::nullopt;

    Projected2DSplat out;
    out.mean_x = mx;
    out.mean_y = my;
    double inv_det = 1.0 / det;
    out.conic_a = cov2(1, 1) * inv_det;
    out.conic_b = -cov2(0, 1) * inv_det;
    out.conic_c = cov2(0, 0) * inv_det;
    out.depth = p.z();
    out.opacity = splat.opacity;
    out.rgb = splat.rgb;
    out.radius = radius;
    out.id = id;
    return out;
}

namespace {

int resolve_threads(int threads) {
#ifdef _OPENMP
    if (threads <= 0) return omp_get_max_threads();
    return threads;
#else
    (void)threads;
    return 1;
#endif
}

}  // namespace

FrameImage render(std::span<const GaussianSplat> splats, const CameraSpec& cam,
                  const RenderOptions& opts) {
    validate_camera(cam);
    require(opts.tile_size >= 1, "render: tile size must be >= 1");
    const int w = cam.width, h = cam.height;
    FrameImage img(w, h);

    std::vector<Projected2DSplat> proj;
    proj.reserve(splats.size());
    for (size_t i = 0; i < splats.size(); ++i)
        if (auto p = project_splat(splats[i], cam, opts.near_plane, static_cast<uint32_t>(i)))
            proj.push_back(*p);

    // Global front-to-back order; ids break depth ties so rendering is a
    // pure function of the input list.
    std::sort(proj.begin(), proj.end(), [](const Projected2DSplat& a, const Projected2DSplat& b) {
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.id < b.id;
    });

    const int tile = opts.tile_size;
    const int tiles_x = (w + tile - 1) / tile;
    const int tiles_y = (h + tile - 1) / tile;
    std::vector<std::vector<uint32_t>> bins(static_cast<size_t>(tiles_x) * tiles_y);

    // Conservative binning over the radius box: a splat outside the box is
    // outside the 3-sigma ellipse at every pixel center it misses, where
    // alpha_at is exactly zero, so over-inclusion never changes the image.
    for (uint32_t s = 0; s < proj.size(); ++s) {
        const Projected2DSplat& ps = proj[s];
        int px0 = std::max(0, static_cast<int>(std::floor(ps.mean_x - ps.radius)) - 1);
        int px1 = std::min(w - 1, static_cast<int>(std::ceil(ps.mean_x + ps.radius)) + 1);
        int py0 = std::max(0, static_cast<int>(std::floor(ps.mean_y - ps.radius)) - 1);
        int py1 = std::min(h - 1, static_cast<int>(std::ceil(ps.mean_y + ps.radius)) + 1);
        if (px0 > px1 || py0 > py1) continue;
        for (int ty = py0 / tile; ty <= py1 / tile; ++ty)
            for (int tx = px0 / tile; tx <= px1 / tile; ++tx)
                bins[static_cast<size_t>(ty) * tiles_x + tx].push_back(s);
    }

    const int n_tiles = tiles_x * tiles_y;
    const int threads = resolve_threads(opts.threads);
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1) if (threads > 1)
#endif
    for (int t = 0; t < n_tiles; ++t) {
        const std::vector<uint32_t>& bin = bins[t];
        const int x0 = (t % tiles_x) * tile, y0 = (t / tiles_x) * tile;
        const int x1 = std::min(x0 + tile, w), y1 = std::min(y0 + tile, h);
        for (int y = y0; y < y1; ++y) {
            double py = y + 0.5;
            for (int x = x0; x < x1; ++x) {
                double px = x + 0.5;
                double transmit = 1.0;
                double r = 0.0, g = 0.0, b = 0.0;
                for (uint32_t s : bin) {
                    const Projected2DSplat& ps = proj[s];
                    double alpha = alpha_at(ps, px, py);
                    if (alpha < kAlphaSkip) continue;
                    double wgt = transmit * alpha;
                    r += wgt * ps.rgb[0];
                    g += wgt * ps.rgb[1];
                    b += wgt * ps.rgb[2];
                    transmit *= 1.0 - alpha;
                    if (transmit < kTransmittanceStop) break;
                }
                double* out = img.pixel(x, y);
                out[0] = r + transmit * opts.background[0];
                out[1] = g + transmit * opts.background[1];
                out[2] = b + transmit * opts.background[2];
            }
        }
    }
    return img;
}

}  // namespace gsw
