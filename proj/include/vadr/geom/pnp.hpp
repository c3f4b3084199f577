#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vadr/geom/camera.hpp"
#include "vadr/pose.hpp"

namespace vadr::geom {

struct PnpResult {
  Pose cube_to_palm;
  double reprojection_rms = 0.0;  // pixels
  bool converged = false;
  int iterations = 0;
};

namespace detail {

struct Correspondence {
  Vec3 model;               // cube frame
  Eigen::Vector2d pixel;    // detected
  Eigen::Vector2d normed;   // intrinsics removed
};

inline Eigen::Matrix3d skew(const Vec3& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

inline Eigen::Matrix3d closest_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

// Direct linear transform for the cube-to-camera pose; needs >= 6 points.
inline std::optional<Pose> dlt_init(const std::vector<Correspondence>& corr) {
  const int n = static_cast<int>(corr.size());
  if (n < 6) return std::nullopt;
  Eigen::MatrixXd a(2 * n, 12);
  for (int i = 0; i < n; ++i) {
    const Vec3& x = corr[static_cast<std::size_t>(i)].model;
    const Eigen::Vector2d& m = corr[static_cast<std::size_t>(i)].normed;
    Eigen::RowVector4d xh(x.x(), x.y(), x.z(), 1.0);
    a.row(2 * i) << xh, Eigen::RowVector4d::Zero(), -m.x() * xh;
    a.row(2 * i + 1) << Eigen::RowVector4d::Zero(), xh, -m.y() * xh;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
  Eigen::VectorXd p = svd.matrixV().col(11);
  Eigen::Matrix<double, 3, 4> m;
  m << p.segment<4>(0).transpose(), p.segment<4>(4).transpose(),
      p.segment<4>(8).transpose();

  // Fix the global sign so points sit in front of the camera.
  double depth_sum = 0.0;
  for (const auto& c : corr) {
    Eigen::Vector4d xh(c.model.x(), c.model.y(), c.model.z(), 1.0);
    depth_sum += (m.row(2) * xh).value();
  }
  if (depth_sum < 0.0) m = -m;

  const Eigen::Matrix3d m3 = m.leftCols<3>();
  const double scale = m3.jacobiSvd().singularValues().mean();
  if (!(scale > 1e-12) || !std::isfinite(scale)) return std::nullopt;
  Pose pose;
  pose.orientation = Quat(closest_rotation(m3 / scale)).normalized();
  pose.position = m.rightCols<1>() / scale;
  return pose;
}

// Gauss-Newton on the pixel reprojection residual over a local twist.
inline PnpResult refine(const CameraModel& camera,
                        const std::vector<Correspondence>& corr,
                        Pose cube_to_cam, int max_iterations = 60) {
  const int n = static_cast<int>(corr.size());
  auto rms = [&](const Pose& pose) {
    double ss = 0.0;
    for (const auto& c : corr) {
      const Vec3 p = pose.apply(c.model);
      if (p.z() <= 1e-9) return std::numeric_limits<double>::infinity();
      ss += (camera.project_camera_point(p) - c.pixel).squaredNorm();
    }
    return std::sqrt(ss / n);
  };

  PnpResult result;
  double err = rms(cube_to_cam);
  int it = 0;
  for (; it < max_iterations; ++it) {
    Eigen::Matrix<double, 6, 6> h = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
    for (const auto& c : corr) {
      const Vec3 p = cube_to_cam.apply(c.model);
      if (p.z() <= 1e-9) continue;
      const double z_inv = 1.0 / p.z();
      Eigen::Matrix<double, 2, 3> d_pix;
      d_pix << camera.fx * z_inv, 0.0, -camera.fx * p.x() * z_inv * z_inv,
          0.0, camera.fy * z_inv, -camera.fy * p.y() * z_inv * z_inv;
      Eigen::Matrix<double, 3, 6> d_point;
      d_point.leftCols<3>() = -skew(p);
      d_point.rightCols<3>() = Eigen::Matrix3d::Identity();
      const Eigen::Matrix<double, 2, 6> j = d_pix * d_point;
      const Eigen::Vector2d r = camera.project_camera_point(p) - c.pixel;
      h += j.transpose() * j;
      g += j.transpose() * r;
    }
    h.diagonal().array() += 1e-12;
    const Eigen::Matrix<double, 6, 1> delta = h.ldlt().solve(-g);
    if (!delta.allFinite()) break;

    Pose next = cube_to_cam;
    const Vec3 w = delta.head<3>();
    const double angle = w.norm();
    if (angle > 1e-16) {
      const Quat dq(Eigen::AngleAxisd(angle, w / angle));
      next.orientation = (dq * next.orientation).normalized();
      next.position = dq * next.position;
    }
    next.position += delta.tail<3>();

    const double next_err = rms(next);
    if (!(next_err <= err + 1e-15)) break;  // no improvement
    cube_to_cam = next;
    const bool tiny = delta.norm() < 1e-14 || (err - next_err) < 1e-15;
    err = next_err;
    if (tiny) {
      ++it;
      break;
    }
  }
  result.cube_to_palm = cube_to_cam;  // camera frame here; caller composes
  result.reprojection_rms = err;
  result.converged = std::isfinite(err) && it < max_iterations;
  result.iterations = it;
  return result;
}

}  // namespace detail

// Pose from 2D-3D correspondences by minimising squared pixel reprojection
// error: DLT initialisation when enough points are available (or the caller
// supplies a prior), multi-start refinement otherwise.
inline PnpResult pnp_solve(const CameraModel& camera,
                           const KeypointObservation& keypoints,
                           const CubeModel& model,
                           std::optional<Pose> init = std::nullopt) {
  std::vector<detail::Correspondence> corr;
  for (int i = 0; i < 8; ++i) {
    const auto& k = keypoints.corners[static_cast<std::size_t>(i)];
    if (!k.valid) continue;
    corr.push_back({model.corner(i), k.uv, camera.normalise_pixel(k.uv)});
  }
  if (corr.size() < 4)
    throw std::invalid_argument("PnP needs at least 4 valid keypoints, got " +
                                std::to_string(corr.size()));

  std::vector<Pose> seeds;
  if (init) {
    // Caller prior is palm-frame; move it into the camera frame.
    seeds.push_back(camera.camera_to_palm.inverse() * (*init));
  } else if (auto dlt = detail::dlt_init(corr)) {
    seeds.push_back(*dlt);
  } else {
    // Too few points for DLT: seed a small rotation grid at a depth implied
    // by the pixel spread of the detections.
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& c : corr) mean += c.pixel;
    mean /= static_cast<double>(corr.size());
    double spread = 0.0;
    for (const auto& c : corr)
      spread = std::max(spread, (c.pixel - mean).norm());
    const double model_radius = model.edge * std::sqrt(3.0) / 2.0;
    const double z0 = camera.fx * model_radius / std::max(spread, 1.0);
    const Vec3 center((mean.x() - camera.cx) / camera.fx * z0,
                      (mean.y() - camera.cy) / camera.fy * z0, z0);
    for (int face = 0; face < 6; ++face)
      for (int turn = 0; turn < 4; ++turn) {
        const Vec3 axis = Vec3::Unit(face % 3) * (face < 3 ? 1.0 : -1.0);
        Pose seed;
        seed.orientation =
            Quat(Eigen::AngleAxisd(M_PI_2 * turn, Vec3::UnitZ())) *
            Quat::FromTwoVectors(Vec3::UnitZ(), axis);
        seed.position = center;
        seeds.push_back(seed);
      }
  }

  PnpResult best;
  best.reprojection_rms = std::numeric_limits<double>::infinity();
  for (const auto& seed : seeds) {
    PnpResult r = detail::refine(camera, corr, seed);
    if (r.reprojection_rms < best.reprojection_rms) best = r;
  }
  best.cube_to_palm = camera.camera_to_palm * best.cube_to_palm;
  return best;
}

// Root-mean-square pixel residual of a palm-frame pose against detections.
inline double reprojection_rms(const CameraModel& camera,
                               const KeypointObservation& keypoints,
                               const CubeModel& model, const Pose& cube_to_palm) {
  double ss = 0.0;
  int n = 0;
  for (int i = 0; i < 8; ++i) {
    const auto& k = keypoints.corners[static_cast<std::size_t>(i)];
    if (!k.valid) continue;
    const PixelPoint p = camera.project(cube_to_palm.apply(model.corner(i)));
    if (!p.valid) return std::numeric_limits<double>::infinity();
    ss += (p.uv - k.uv).squaredNorm();
    ++n;
  }
  if (n == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(ss / n);
}

}  // namespace vadr::geom
