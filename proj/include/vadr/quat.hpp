#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "vadr/rng.hpp"

namespace vadr {

using Quat = Eigen::Quaterniond;
using Vec3 = Eigen::Vector3d;

inline constexpr double kUnitNormHardTol = 1e-6;

// Count of inputs that needed renormalisation inside the hard tolerance.
inline std::atomic<std::uint64_t>& quat_normalisation_warnings() {
  static std::atomic<std::uint64_t> count{0};
  return count;
}

inline Quat ensure_unit(const Quat& q) {
  const double norm = q.norm();
  const double err = std::abs(norm - 1.0);
  if (err <= 1e-9) return q;
  if (err <= kUnitNormHardTol) {
    quat_normalisation_warnings().fetch_add(1, std::memory_order_relaxed);
    return q.normalized();
  }
  throw std::invalid_argument("quaternion norm deviates from 1 by more than 1e-6");
}

// Geodesic distance on SO(3), in radians. Respects the q / -q double cover.
inline double rotation_distance(const Quat& a, const Quat& b) {
  const Quat qa = ensure_unit(a);
  const Quat qb = ensure_unit(b);
  const double dot = std::abs(qa.dot(qb));
  return 2.0 * std::acos(std::min(1.0, dot));
}

// Uniform sample on SO(3): normalised 4D Gaussian.
inline Quat uniform_quaternion(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Quat q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q;
}

// First-order integration of a world-frame angular velocity over dt.
inline Quat integrate_angular_velocity(const Quat& q, const Vec3& omega, double dt) {
  const double angle = omega.norm() * dt;
  if (angle < 1e-14) return q;
  const Vec3 axis = omega.normalized();
  const Quat dq(Eigen::AngleAxisd(angle, axis));
  return (dq * q).normalized();
}

// Shortest rotation vector (axis * angle) taking `from` onto `to`.
inline Vec3 rotation_vector_to(const Quat& from, const Quat& to) {
  Quat err = to * from.conjugate();
  if (err.w() < 0.0) err.coeffs() = -err.coeffs();
  err.normalize();
  const double w = std::min(1.0, err.w());
  const double angle = 2.0 * std::acos(w);
  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  if (s < 1e-12) return Vec3::Zero();
  return err.vec() / s * angle;
}

}  // namespace vadr
