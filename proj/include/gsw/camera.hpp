#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <string>
#include <vector>

namespace gsw {

// Pinhole camera, COLMAP-style: x right, y down, z forward, and
// cam = rotation * world + translation.
struct CameraSpec {
    std::string name = "cam";
    int width = 640, height = 480;
    double fx = 500, fy = 500;
    double cx = 320, cy = 240;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // world -> camera
    Eigen::Vector3d translation{0, 0, 0};

    Eigen::Vector3d position() const { return -rotation.transpose() * translation; }
};

// Throws gsw::Error when dimensions/focals are non-positive or the rotation
// is not orthonormal with determinant +1 (tolerance 1e-6).
void validate_camera(const CameraSpec& cam);

// JSON camera lists ({"version":1,"cameras":[...]}); validation applied on
// load. Errors carry path context.
std::vector<CameraSpec> load_cameras(const std::string& path);
void save_cameras(const std::string& path, const std::vector<CameraSpec>& cams);

// Camera looking from `eye` toward `target` with image-up along world +y.
// Throws gsw::Error when the view direction is vertical (up undefined).
CameraSpec look_at_camera(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, int width,
                          int height, double fov_x_deg, const std::string& name = "cam");

// `count` cameras evenly spaced on a circle of `radius` around `center`,
// raised by `elevation_deg`, all aimed at the center.
std::vector<CameraSpec> orbit_cameras(const Eigen::Vector3d& center, double radius,
                                      double elevation_deg, int count, int width, int height,
                                      double fov_x_deg = 60.0);

}  // namespace gsw
