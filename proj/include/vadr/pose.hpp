#pragma once

#include "vadr/quat.hpp"

namespace vadr {

// Rigid pose: unit-quaternion orientation + translation in meters.
struct Pose {
  Quat orientation = Quat::Identity();
  Vec3 position = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return orientation * p + position; }

  Pose inverse() const {
    const Quat qi = orientation.conjugate();
    return {qi, qi * (-position)};
  }

  friend Pose operator*(const Pose& a, const Pose& b) {
    return {(a.orientation * b.orientation).normalized(),
            a.orientation * b.position + a.position};
  }
};

}  // namespace vadr
