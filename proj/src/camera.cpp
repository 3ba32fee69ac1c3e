#include "gsw/camera.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>

#include "gsw/error.hpp"

namespace gsw {

using nlohmann::json;

void validate_camera(const CameraSpec& cam) {
    require(cam.width >= 1 && cam.height >= 1, "camera '", cam.name,
            "': image dimensions must be positive");
    require(cam.fx > 0.0 && cam.fy > 0.0, "camera '", cam.name, "': focal lengths must be > 0");
    require(cam.rotation.allFinite() && cam.translation.allFinite(), "camera '", cam.name,
            "': non-finite extrinsics");
    Eigen::Matrix3d rtr = cam.rotation.transpose() * cam.rotation;
    require((rtr - Eigen::Matrix3d::Identity()).norm() < 1e-6, "camera '", cam.name,
            "': rotation is not orthonormal");
    require(std::abs(cam.rotation.determinant() - 1.0) < 1e-6, "camera '", cam.name,
            "': rotation must have determinant +1");
}

std::vector<CameraSpec> load_cameras(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open camera file '", path, "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail("camera file '", path, "': ", e.what());
    }
    if (!doc.is_object() || !doc.contains("cameras") || !doc["cameras"].is_array())
        fail("camera file '", path, "': expected an object with a \"cameras\" array");

    std::vector<CameraSpec> cams;
    for (size_t n = 0; n < doc["cameras"].size(); ++n) {
        const json& j = doc["cameras"][n];
        CameraSpec c;
        try {
            c.name = j.value("name", "cam" + std::to_string(n));
            c.width = j.at("width").get<int>();
            c.height = j.at("height").get<int>();
            c.fx = j.at("fx").get<double>();
            c.fy = j.at("fy").get<double>();
            c.cx = j.at("cx").get<double>();
            c.cy = j.at("cy").get<double>();
            const json& r = j.at("rotation");
            if (!r.is_array() || r.size() != 3) throw Error("rotation must be 3 rows of 3");
            for (int row = 0; row < 3; ++row) {
                if (!r[row].is_array() || r[row].size() != 3)
                    throw Error("rotation must be 3 rows of 3");
                for (int col = 0; col < 3; ++col)
                    c.rotation(row, col) = r[row][col].get<double>();
            }
            const json& t = j.at("translation");
            if (!t.is_array() || t.size() != 3) throw Error("translation must be 3 numbers");
            for (int a = 0; a < 3; ++a) c.translation[a] = t[a].get<double>();
        } catch (const json::exception& e) {
            fail("camera file '", path, "', camera ", n, ": ", e.what());
        } catch (const Error& e) {
            fail("camera file '", path, "', camera ", n, ": ", e.what());
        }
        validate_camera(c);
        cams.push_back(std::move(c));
    }
    if (cams.empty()) fail("camera file '", path, "': no cameras");
    return cams;
}

void save_cameras(const std::string& path, const std::vector<CameraSpec>& cams) {
    json list = json::array();
    for (const CameraSpec& c : cams) {
        json r = json::array();
        for (int row = 0; row < 3; ++row)
            r.push_back({c.rotation(row, 0), c.rotation(row, 1), c.rotation(row, 2)});
        list.push_back({{"name", c.name},
                        {"width", c.width},
                        {"height", c.height},
                        {"fx", c.fx},
                        {"fy", c.fy},
                        {"cx", c.cx},
                        {"cy", c.cy},
                        {"rotation", r},
                        {"translation", {c.translation[0], c.translation[1], c.translation[2]}}});
    }
    json doc = {{"version", 1}, {"cameras", list}};
    std::ofstream out(path);
    if (!out) fail("cannot write camera file '", path, "'");
    out << doc.dump(2) << "\n";
    if (!out) fail("write failed for camera file '", path, "'");
}

CameraSpec look_at_camera(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, int width,
                          int height, double fov_x_deg, const std::string& name) {
    Eigen::Vector3d forward = target - eye;
    require(forward.norm() > 1e-12, "look_at_camera: eye and target coincide");
    forward.normalize();
    Eigen::Vector3d up{0, 1, 0};
    Eigen::Vector3d right = forward.cross(up);
    require(right.norm() > 1e-9, "look_at_camera: view direction is vertical, up undefined");
    right.normalize();
    Eigen::Vector3d down = forward.cross(right);  // y-down image convention

    CameraSpec c;
    c.name = name;
    c.width = width;
    c.height = height;
    c.rotation.row(0) = right;
    c.rotation.row(1) = down;
    c.rotation.row(2) = forward;
    c.translation = -c.rotation * eye;
    double half = 0.5 * fov_x_deg * std::numbers::pi / 180.0;
    require(half > 0.0 && half < 0.5 * std::numbers::pi, "look_at_camera: fov out of range");
    c.fx = 0.5 * width / std::tan(half);
    c.fy = c.fx;  // square pixels
    c.cx = 0.5 * width;
    c.cy = 0.5 * height;
    validate_camera(c);
    return c;
}

std::vector<CameraSpec> orbit_cameras(const Eigen::Vector3d& center, double radius,
                                      double elevation_deg, int count, int width, int height,
                                      double fov_x_deg) {
    require(count >= 1, "orbit_cameras: count must be >= 1");
    require(radius > 0.0, "orbit_cameras: radius must be > 0");
    require(std::abs(elevation_deg) < 90.0, "orbit_cameras: elevation must be in (-90, 90)");
    double elev = elevation_deg * std::numbers::pi / 180.0;
    std::vector<CameraSpec> cams;
    for (int i = 0; i < count; ++i) {
        double az = 2.0 * std::numbers::pi * i / count;
        Eigen::Vector3d eye = center + radius * Eigen::Vector3d{std::cos(elev) * std::cos(az),
                                                                std::sin(elev),
                                                                std::cos(elev) * std::sin(az)};
        cams.push_back(
            look_at_camera(eye, center, width, height, fov_x_deg, "orbit" + std::to_string(i)));
    }
    return cams;
}

}  // namespace gsw
