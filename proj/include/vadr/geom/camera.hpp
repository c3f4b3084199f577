#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vadr/pose.hpp"
#include "vadr/quat.hpp"

namespace vadr::geom {

struct PixelPoint {
  Eigen::Vector2d uv = Eigen::Vector2d::Zero();
  bool valid = false;
};

// Pinhole camera with a rigid camera-to-palm extrinsic.
struct CameraModel {
  double fx = 500.0;
  double fy = 500.0;
  double cx = 160.0;
  double cy = 120.0;
  int width = 320;
  int height = 240;
  Pose camera_to_palm;

  void validate() const {
    if (fx <= 0.0 || fy <= 0.0)
      throw std::invalid_argument("focal lengths must be positive");
    const Eigen::Matrix3d r = camera_to_palm.orientation.toRotationMatrix();
    if (std::abs(r.determinant() - 1.0) > 1e-6)
      throw std::invalid_argument("extrinsic rotation not proper");
  }

  Vec3 palm_to_camera_point(const Vec3& p_palm) const {
    return camera_to_palm.inverse().apply(p_palm);
  }

  Eigen::Vector2d project_camera_point(const Vec3& p_cam) const {
    return {fx * p_cam.x() / p_cam.z() + cx, fy * p_cam.y() / p_cam.z() + cy};
  }

  // Palm-frame point to pixel; flagged invalid at non-positive depth.
  PixelPoint project(const Vec3& p_palm) const {
    const Vec3 p_cam = palm_to_camera_point(p_palm);
    if (p_cam.z() <= 0.0) return {};
    return {project_camera_point(p_cam), true};
  }

  // 3x4 palm-to-pixel projection matrix in normalised coordinates
  // (intrinsics removed), used by triangulation.
  Eigen::Matrix<double, 3, 4> normalised_projection() const {
    const Pose palm_to_cam = camera_to_palm.inverse();
    Eigen::Matrix<double, 3, 4> p;
    p.leftCols<3>() = palm_to_cam.orientation.toRotationMatrix();
    p.rightCols<1>() = palm_to_cam.position;
    return p;
  }

  Eigen::Vector2d normalise_pixel(const Eigen::Vector2d& uv) const {
    return {(uv.x() - cx) / fx, (uv.y() - cy) / fy};
  }
};

using CameraRig = std::vector<CameraModel>;

// Labelled 2D corner detections for one camera.
struct KeypointObservation {
  std::array<PixelPoint, 8> corners;

  int valid_count() const {
    int n = 0;
    for (const auto& c : corners) n += c.valid ? 1 : 0;
    return n;
  }
};

// Axis-aligned cube centred at its frame origin; corner i has coordinate
// signs from the bits of i (bit 0 -> x, bit 1 -> y, bit 2 -> z).
struct CubeModel {
  double edge = 0.065;

  Vec3 corner(int i) const {
    if (i < 0 || i > 7) throw std::out_of_range("corner index");
    const double h = edge / 2.0;
    return {(i & 1) ? h : -h, (i & 2) ? h : -h, (i & 4) ? h : -h};
  }

  std::array<Vec3, 8> corners() const {
    std::array<Vec3, 8> out;
    for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = corner(i);
    return out;
  }
};

// Ground-truth projection of a cube pose into one camera.
inline KeypointObservation project_cube(const CameraModel& camera,
                                        const CubeModel& model,
                                        const Pose& cube_to_palm) {
  KeypointObservation obs;
  for (int i = 0; i < 8; ++i)
    obs.corners[static_cast<std::size_t>(i)] =
        camera.project(cube_to_palm.apply(model.corner(i)));
  return obs;
}

}  // namespace vadr::geom
