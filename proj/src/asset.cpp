#include "gsw/asset.hpp"

#include "gsw/error.hpp"
#include "gsw/scene_io.hpp"

namespace gsw {

AssetGaussians load_asset(const std::string& path, bool apply_activations) {
    GaussianScene scene = load_gaussian_ply(path, apply_activations);
    AssetGaussians asset;
    asset.splats = std::move(scene.splats);
    Eigen::Vector3d c = scene.bounds.center();
    asset.reference_point = {c.x(), scene.bounds.lo.y(), c.z()};  // bottom-center
    return asset;
}

std::vector<GaussianSplat> align_asset(const AssetGaussians& asset,
                                       const Eigen::Vector3d& pose_position,
                                       const Eigen::Quaterniond& pose_rotation,
                                       double uniform_scale) {
    require(uniform_scale > 0.0, "align_asset: scale must be positive, got ", uniform_scale);
    double refn = asset.reference_orientation.norm();
    require(std::abs(refn - 1.0) < 1e-6, "align_asset: reference orientation not unit (norm ",
            refn, ")");

    Eigen::Quaterniond delta = pose_rotation * asset.reference_orientation.conjugate();
    delta.normalize();
    Eigen::Matrix3d rot = delta.toRotationMatrix();

    std::vector<GaussianSplat> out;
    out.reserve(asset.splats.size());
    for (const GaussianSplat& s : asset.splats) {
        GaussianSplat t = s;
        t.position =
            pose_position + rot * ((s.position - asset.reference_point) * uniform_scale);
        t.rotation = (delta * s.rotation).normalized();
        t.scale = s.scale * uniform_scale;
        out.push_back(t);
    }
    return out;
}

}  // namespace gsw
