#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <array>
#include <stdexcept>
#include <vector>

#include "vadr/geom/camera.hpp"

namespace vadr::geom {

struct TriangulatedPoint {
  Vec3 point = Vec3::Zero();
  bool valid = false;
  int views = 0;
};

// Linear (DLT) triangulation of one labelled point across cameras,
// minimising the algebraic error in normalised coordinates.
inline TriangulatedPoint triangulate_point(
    const std::vector<const CameraModel*>& cameras,
    const std::vector<Eigen::Vector2d>& pixels) {
  if (cameras.size() != pixels.size())
    throw std::invalid_argument("camera/pixel count mismatch");
  const int m = static_cast<int>(cameras.size());
  if (m < 2) return {};

  Eigen::MatrixXd a(2 * m, 4);
  for (int i = 0; i < m; ++i) {
    const auto p = cameras[static_cast<std::size_t>(i)]->normalised_projection();
    const Eigen::Vector2d x = cameras[static_cast<std::size_t>(i)]->normalise_pixel(
        pixels[static_cast<std::size_t>(i)]);
    a.row(2 * i) = x.x() * p.row(2) - p.row(0);
    a.row(2 * i + 1) = x.y() * p.row(2) - p.row(1);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
  const Eigen::Vector4d xh = svd.matrixV().col(3);
  if (std::abs(xh[3]) < 1e-15) return {};
  return {xh.head<3>() / xh[3], true, m};
}

// Per-corner triangulation from the surviving cameras; corners seen by
// fewer than two cameras are flagged missing.
inline std::array<TriangulatedPoint, 8> triangulate_corners(
    const CameraRig& rig, const std::vector<KeypointObservation>& observations,
    const std::vector<std::uint8_t>& camera_kept) {
  if (observations.size() != rig.size() || camera_kept.size() != rig.size())
    throw std::invalid_argument("rig/observation size mismatch");
  std::array<TriangulatedPoint, 8> out;
  for (int corner = 0; corner < 8; ++corner) {
    std::vector<const CameraModel*> cams;
    std::vector<Eigen::Vector2d> pixels;
    for (std::size_t c = 0; c < rig.size(); ++c) {
      if (!camera_kept[c]) continue;
      const auto& k = observations[c].corners[static_cast<std::size_t>(corner)];
      if (!k.valid) continue;
      cams.push_back(&rig[c]);
      pixels.push_back(k.uv);
    }
    out[static_cast<std::size_t>(corner)] = triangulate_point(cams, pixels);
  }
  return out;
}

}  // namespace vadr::geom
