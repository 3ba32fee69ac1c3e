#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <limits>

namespace gsw {

struct Aabb {
    Eigen::Vector3d lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                       std::numeric_limits<double>::max()};
    Eigen::Vector3d hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
                       std::numeric_limits<double>::lowest()};

    Aabb() = default;
    Aabb(const Eigen::Vector3d& lo_, const Eigen::Vector3d& hi_) : lo(lo_), hi(hi_) {}

    bool valid() const { return (lo.array() <= hi.array()).all(); }

    void expand(const Eigen::Vector3d& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }

    void expand(const Aabb& b) {
        lo = lo.cwiseMin(b.lo);
        hi = hi.cwiseMax(b.hi);
    }

    Eigen::Vector3d extent() const { return hi - lo; }
    Eigen::Vector3d center() const { return 0.5 * (lo + hi); }

    bool contains(const Eigen::Vector3d& p) const {
        return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
    }

    // Squared distance from p to the box (0 inside); used for BVH pruning.
    double distance_sq(const Eigen::Vector3d& p) const {
        double d2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            double d = std::max({lo[a] - p[a], 0.0, p[a] - hi[a]});
            d2 += d * d;
        }
        return d2;
    }
};

}  // namespace gsw
