#pragma once

#include "vadr/pose.hpp"
#include "vadr/rng.hpp"

namespace vadr::ops {

// Replaces the observed pose with a completely random one on a per-step
// Bernoulli draw; the injection probability is sampled once per episode
// from U(0, p_max).
class PoseInjector {
 public:
  PoseInjector() = default;
  explicit PoseInjector(double workspace_half_extent)
      : half_extent_(workspace_half_extent) {}

  void reset(double p_max, Rng& rng) {
    p_ = (p_max > 0.0) ? uniform(rng, 0.0, p_max) : 0.0;
  }

  double probability() const { return p_; }

  Pose random_pose(Rng& rng) const {
    Pose p;
    p.orientation = uniform_quaternion(rng);
    for (int i = 0; i < 3; ++i)
      p.position[i] = uniform(rng, -half_extent_, half_extent_);
    return p;
  }

  Pose step(const Pose& true_pose, Rng& rng) {
    if (!bernoulli(rng, p_)) return true_pose;
    return random_pose(rng);
  }

 private:
  double p_ = 0.0;
  double half_extent_ = 0.05;  // position uniform in a 10 cm box at the palm
};

}  // namespace vadr::ops
