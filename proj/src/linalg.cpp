#include "gsw/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gsw/error.hpp"

namespace gsw {

Eigen::Matrix3d matrix_from_quaternion(const Eigen::Quaterniond& q) {
    return q.normalized().toRotationMatrix();
}

Eigen::Quaterniond quaternion_from_matrix(const Eigen::Matrix3d& r, double tol) {
    double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (ortho > tol)
        fail("quaternion_from_matrix: matrix is not orthonormal (max |R^T R - I| = ", ortho, ")");
    double det = r.determinant();
    if (det < 0.0)
        fail("quaternion_from_matrix: matrix is a reflection (det = ", det, ")");
    Eigen::Quaterniond q(r);
    q.normalize();
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    return q;
}

namespace {

// Reconstruction residual relative to |m|; used to detect when the
// closed-form eigen-solve lost too much precision.
double svd_residual(const Eigen::Matrix3d& m, const Svd3& s) {
    Eigen::Matrix3d rec = s.u * s.sigma.asDiagonal() * s.v.transpose();
    double scale = std::max(m.norm(), 1e-300);
    return (rec - m).norm() / scale;
}

Svd3 svd3_jacobi(const Eigen::Matrix3d& m) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Svd3 out;
    out.u = svd.matrixU();
    out.sigma = svd.singularValues();
    out.v = svd.matrixV();
    return out;
}

}  // namespace

Svd3 svd3(const Eigen::Matrix3d& m) {
    // Eigen-decompose m^T m (symmetric PSD): eigenvalues are sigma^2 and the
    // eigenvectors form V. U columns are recovered as m v_i / sigma_i, with
    // orthonormal completion for (near-)zero singular values.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
    es.computeDirect(m.transpose() * m);

    Svd3 out;
    // Ascending eigenvalues -> descending singular values.
    for (int i = 0; i < 3; ++i) {
        out.sigma[i] = std::sqrt(std::max(0.0, es.eigenvalues()[2 - i]));
        out.v.col(i) = es.eigenvectors().col(2 - i);
    }
    if (out.v.determinant() < 0.0) out.v.col(2) = -out.v.col(2);

    double smax = out.sigma[0];
    double eps = 1e-10 * std::max(smax, 1e-300);
    for (int i = 0; i < 3; ++i) {
        if (out.sigma[i] > eps) {
            out.u.col(i) = m * out.v.col(i) / out.sigma[i];
        } else if (i == 1) {
            // Pick any unit vector orthogonal to u0.
            Eigen::Vector3d ref = std::abs(out.u.col(0).x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                                   : Eigen::Vector3d::UnitY();
            out.u.col(1) = out.u.col(0).cross(ref).normalized();
        } else if (i == 2) {
            out.u.col(2) = out.u.col(0).cross(out.u.col(1));
        } else {
            out.u.setIdentity();  // m ~ 0: any orthogonal U works
            break;
        }
    }
    // Re-orthonormalize U (Gram-Schmidt); computeDirect noise can leave the
    // recovered columns slightly non-orthogonal.
    out.u.col(0).normalize();
    out.u.col(1) = (out.u.col(1) - out.u.col(1).dot(out.u.col(0)) * out.u.col(0)).normalized();
    out.u.col(2) = out.u.col(0).cross(out.u.col(1));
    if ((m * out.v.col(2) - out.sigma[2] * out.u.col(2)).norm() >
        (m * out.v.col(2) + out.sigma[2] * out.u.col(2)).norm())
        out.u.col(2) = -out.u.col(2);

    if (svd_residual(m, out) > 1e-9) return svd3_jacobi(m);
    return out;
}

Eigen::Matrix3d polar_rotation(const Eigen::Matrix3d& f) {
    Svd3 s = svd3(f);
    Eigen::Matrix3d u = s.u;
    Eigen::Matrix3d v = s.v;
    if ((u * v.transpose()).determinant() < 0.0) u.col(2) = -u.col(2);
    return u * v.transpose();
}

Eigen::Matrix3d polar_rotation_warm(const Eigen::Matrix3d& f, const Eigen::Matrix3d& r) {
    // Rotation extraction by incremental axis-angle updates: rotate r so the
    // sum of cross products between its columns and f's columns vanishes.
    // Converges quadratically near the polar factor; warm starts need only a
    // couple of iterations.
    Eigen::Matrix3d rot = r;
    for (int iter = 0; iter < 24; ++iter) {
        Eigen::Vector3d omega = rot.col(0).cross(f.col(0)) + rot.col(1).cross(f.col(1)) +
                                rot.col(2).cross(f.col(2));
        double denom = std::abs(rot.col(0).dot(f.col(0)) + rot.col(1).dot(f.col(1)) +
                                rot.col(2).dot(f.col(2))) +
                       1e-12;
        omega /= denom;
        double angle = omega.norm();
        if (angle < 1e-12) break;
        rot = Eigen::AngleAxisd(angle, omega / angle).toRotationMatrix() * rot;
    }
    return rot;
}

}  // namespace gsw
