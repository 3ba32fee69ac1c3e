#include "gsw/gaussian.hpp"

#include <cmath>

#include "gsw/error.hpp"

namespace gsw {

namespace {

// Real SH basis constants, standard tables.
constexpr double kShC0 = 0.28209479177387814;  // 1 / (2 sqrt(pi))
constexpr double kShC1 = 0.4886025119029199;   // sqrt(3) / (2 sqrt(pi))
constexpr double kShC2[5] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005,
                             -1.0925484305920792, 0.5462742152960396};
constexpr double kShC3[7] = {-0.5900435899266435, 2.890611442640554,  -0.4570457994644658,
                             0.3731763325901154,  -0.4570457994644658, 1.445305721320277,
                             -0.5900435899266435};

}  // namespace

Eigen::Matrix3d covariance_from(const Eigen::Quaterniond& rotation, const Eigen::Vector3d& scale,
                                double tol) {
    double n = rotation.norm();
    if (std::abs(n - 1.0) > tol)
        fail("covariance_from: quaternion norm ", n, " deviates from 1 beyond tolerance ", tol);
    if (!(scale.array() > 0.0).all())
        fail("covariance_from: scale must be strictly positive, got (", scale.x(), ", ", scale.y(),
             ", ", scale.z(), ")");
    Eigen::Matrix3d r = rotation.toRotationMatrix();
    Eigen::Matrix3d cov = r * scale.array().square().matrix().asDiagonal() * r.transpose();
    // Symmetrize away round-off so downstream Cholesky/eigen code sees an
    // exactly symmetric matrix.
    return 0.5 * (cov + cov.transpose());
}

Eigen::Vector3d evaluate_sh(int degree, std::span<const double> coeffs,
                            const Eigen::Vector3d& dir) {
    if (degree < 0 || degree > 3) fail("evaluate_sh: unsupported degree ", degree);
    int n = sh_coeff_count(degree);
    if (static_cast<int>(coeffs.size()) != 3 * n)
        fail("evaluate_sh: expected ", 3 * n, " coefficients for degree ", degree, ", got ",
             coeffs.size());

    double basis[16];
    basis[0] = kShC0;
    if (degree >= 1) {
        double x = dir.x(), y = dir.y(), z = dir.z();
        basis[1] = -kShC1 * y;
        basis[2] = kShC1 * z;
        basis[3] = -kShC1 * x;
        if (degree >= 2) {
            double xx = x * x, yy = y * y, zz = z * z;
            basis[4] = kShC2[0] * x * y;
            basis[5] = kShC2[1] * y * z;
            basis[6] = kShC2[2] * (2.0 * zz - xx - yy);
            basis[7] = kShC2[3] * x * z;
            basis[8] = kShC2[4] * (xx - yy);
            if (degree >= 3) {
                basis[9] = kShC3[0] * y * (3.0 * xx - yy);
                basis[10] = kShC3[1] * x * y * z;
                basis[11] = kShC3[2] * y * (4.0 * zz - xx - yy);
                basis[12] = kShC3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy);
                basis[13] = kShC3[4] * x * (4.0 * zz - xx - yy);
                basis[14] = kShC3[5] * z * (xx - yy);
                basis[15] = kShC3[6] * x * (xx - 3.0 * yy);
            }
        }
    }

    Eigen::Vector3d rgb;
    for (int c = 0; c < 3; ++c) {
        double acc = 0.5;
        const double* ch = coeffs.data() + c * n;
        for (int i = 0; i < n; ++i) acc += basis[i] * ch[i];
        rgb[c] = std::clamp(acc, 0.0, 1.0);
    }
    return rgb;
}

}  // namespace gsw
