#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <stdexcept>
#include <vector>

#include "vadr/pose.hpp"

namespace vadr::geom {

// Least-squares rigid alignment of labelled point sets (model -> observed):
// SVD of the cross-covariance with determinant sign correction, so a proper
// rotation is always returned even for mirrored input.
inline Pose register_points(const std::vector<Vec3>& model,
                            const std::vector<Vec3>& observed) {
  if (model.size() != observed.size())
    throw std::invalid_argument("point set size mismatch");
  const int n = static_cast<int>(model.size());
  if (n < 3) throw std::invalid_argument("registration needs >= 3 points");

  Vec3 model_mean = Vec3::Zero();
  Vec3 obs_mean = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    model_mean += model[static_cast<std::size_t>(i)];
    obs_mean += observed[static_cast<std::size_t>(i)];
  }
  model_mean /= n;
  obs_mean /= n;

  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  double model_spread = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 m = model[static_cast<std::size_t>(i)] - model_mean;
    const Vec3 o = observed[static_cast<std::size_t>(i)] - obs_mean;
    h += o * m.transpose();
    model_spread += m.squaredNorm();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sigma = svd.singularValues();
  // Collinear model points leave the rotation about their axis free.
  if (model_spread < 1e-18 || sigma[1] < 1e-12 * std::max(sigma[0], 1e-300))
    throw std::invalid_argument("degenerate point configuration");

  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0)
    d(2, 2) = -1.0;
  const Eigen::Matrix3d r = svd.matrixU() * d * svd.matrixV().transpose();

  Pose pose;
  pose.orientation = Quat(r).normalized();
  pose.position = obs_mean - r * model_mean;
  return pose;
}

}  // namespace vadr::geom
