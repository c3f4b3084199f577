#pragma once

#include <Eigen/Dense>

#include "vadr/quat.hpp"

namespace vadr::env {

struct RewardWeights {
  double rot_close = 1.0;
  double pos_dist = -10.0;
  double action_penalty = -0.001;
  double action_delta_penalty = -0.25;
  double joint_vel_penalty = -0.003;
  double reach_goal_bonus = 250.0;
  double bonus_threshold = 0.1;  // radians; the bonus condition, not the
                                 // success-counting threshold
};

struct RewardTerms {
  double rot_close = 0.0;
  double pos_dist = 0.0;
  double action_penalty = 0.0;
  double action_delta_penalty = 0.0;
  double joint_vel_penalty = 0.0;
  double reach_bonus = 0.0;
  double total = 0.0;
};

// Shaped reorientation reward. Each term is returned individually so logs
// can be checked against the summed total.
inline RewardTerms compute_reward(double rotation_dist, const Vec3& object_pos,
                                  const Vec3& goal_pos,
                                  const Eigen::VectorXd& action,
                                  const Eigen::VectorXd& prev_target,
                                  const Eigen::VectorXd& curr_target,
                                  const Eigen::VectorXd& joint_vel,
                                  const RewardWeights& w = {}) {
  RewardTerms t;
  t.rot_close = w.rot_close * (1.0 / (rotation_dist + 0.1));
  t.pos_dist = w.pos_dist * (object_pos - goal_pos).norm();
  t.action_penalty = w.action_penalty * action.squaredNorm();
  t.action_delta_penalty =
      w.action_delta_penalty * (curr_target - prev_target).squaredNorm();
  t.joint_vel_penalty = w.joint_vel_penalty * joint_vel.squaredNorm();
  t.reach_bonus = (rotation_dist < w.bonus_threshold) ? w.reach_goal_bonus : 0.0;
  t.total = t.rot_close + t.pos_dist + t.action_penalty +
            t.action_delta_penalty + t.joint_vel_penalty + t.reach_bonus;
  return t;
}

}  // namespace vadr::env
