#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vadr/adr/types.hpp"
#include "vadr/env/reward.hpp"
#include "vadr/env/success.hpp"
#include "vadr/ops/physics.hpp"
#include "vadr/pose.hpp"
#include "vadr/quat.hpp"
#include "vadr/rng.hpp"

namespace vadr::env {

inline constexpr int kActionWidth = 6;  // angular velocity command + recentring

struct EnvBatchConfig {
  int num_envs = 64;
  double control_dt = 1.0 / 30.0;
  double omega_max = 2.0;           // rad/s at unit command and unit effort
  double v_max = 0.3;               // m/s recentring authority
  double disturbance_gain = 0.04;   // m/s drift per unit external-force value
  SuccessProtocol protocol;
  RewardWeights reward;
  int effort_dim = -1;              // scaling binding on the rotation command
  int external_forces_dim = -1;     // additive binding driving position drift
  std::uint64_t seed = 0;
};

struct StepResult {
  std::vector<RewardTerms> rewards;
  std::vector<std::uint8_t> done;
  std::vector<std::uint8_t> goal_reached;
  std::vector<adr::EpisodeOutcome> outcomes;
  int faults = 0;  // NaN force-resets this step
};

// Desk-scale kinematic cube batch: the orientation integrates a commanded
// angular velocity, the position drifts under disturbance and is recentred
// by the action. Structure-of-arrays state; one RNG stream per env.
class ReorientEnvBatch {
 public:
  explicit ReorientEnvBatch(EnvBatchConfig config) : config_(config) {
    if (config_.num_envs < 1) throw std::invalid_argument("num_envs < 1");
    config_.protocol.validate();
    const auto n = static_cast<std::size_t>(config_.num_envs);
    orientation_.resize(n);
    position_.assign(n, Vec3::Zero());
    goal_orientation_.resize(n);
    goal_position_.assign(n, Vec3::Zero());
    prev_action_.assign(n, Eigen::VectorXd::Zero(kActionWidth));
    trackers_.assign(n, SuccessTracker(config_.protocol));
    rng_.reserve(n);
    for (int i = 0; i < config_.num_envs; ++i)
      rng_.push_back(make_stream(config_.seed, static_cast<std::uint64_t>(i)));
    for (int i = 0; i < config_.num_envs; ++i) reset_env(i);
  }

  int num_envs() const { return config_.num_envs; }
  const EnvBatchConfig& config() const { return config_; }
  const SuccessProtocol& protocol() const { return config_.protocol; }

  Pose pose(int env) const {
    return {orientation_[static_cast<std::size_t>(env)],
            position_[static_cast<std::size_t>(env)]};
  }
  Pose goal(int env) const {
    return {goal_orientation_[static_cast<std::size_t>(env)],
            goal_position_[static_cast<std::size_t>(env)]};
  }
  int consecutive_successes(int env) const {
    return trackers_[static_cast<std::size_t>(env)].consecutive_successes();
  }
  Rng& env_rng(int env) { return rng_[static_cast<std::size_t>(env)]; }

  void override_pose(int env, const Pose& p) {
    orientation_[static_cast<std::size_t>(env)] = p.orientation;
    position_[static_cast<std::size_t>(env)] = p.position;
  }

  void reset_env(int env) {
    const auto i = static_cast<std::size_t>(env);
    orientation_[i] = uniform_quaternion(rng_[i]);
    position_[i] = goal_position_[i];
    goal_orientation_[i] = resample_goal(rng_[i]).orientation;
    prev_action_[i].setZero();
    trackers_[i].reset();
  }

  void reset_envs(const std::vector<std::uint8_t>& done_mask) {
    if (static_cast<int>(done_mask.size()) != config_.num_envs)
      throw std::invalid_argument("done mask size mismatch");
    for (int i = 0; i < config_.num_envs; ++i)
      if (done_mask[static_cast<std::size_t>(i)]) reset_env(i);
  }

  // New goal orientation uniform on SO(3); goal position is the fixed palm
  // target.
  static Pose resample_goal(Rng& rng) {
    return {uniform_quaternion(rng), Vec3::Zero()};
  }

  StepResult step(const std::vector<Eigen::VectorXd>& executed_actions,
                  const adr::AdrEnvAssignment& assignment) {
    if (static_cast<int>(executed_actions.size()) != config_.num_envs)
      throw std::invalid_argument("action batch size mismatch");
    StepResult result;
    const auto n = static_cast<std::size_t>(config_.num_envs);
    result.rewards.resize(n);
    result.done.assign(n, 0);
    result.goal_reached.assign(n, 0);

    for (int env = 0; env < config_.num_envs; ++env) {
      const auto i = static_cast<std::size_t>(env);
      const Eigen::VectorXd& a = executed_actions[i];
      if (a.size() != kActionWidth)
        throw std::invalid_argument("action width mismatch");

      const double effort =
          ops::PhysicsParamBinding{1.0, adr::DimensionKind::Scaling}.apply(
              config_.effort_dim >= 0
                  ? assignment.value(env, config_.effort_dim)
                  : 1.0);
      const Vec3 omega = clamp_unit(a.head<3>()) * config_.omega_max * effort;
      orientation_[i] =
          integrate_angular_velocity(orientation_[i], omega, config_.control_dt);

      Vec3 drift = Vec3::Zero();
      if (config_.external_forces_dim >= 0) {
        const double severity =
            ops::PhysicsParamBinding{0.0, adr::DimensionKind::Additive}.apply(
                assignment.value(env, config_.external_forces_dim));
        if (severity > 0.0) {
          Vec3 dir(normal(rng_[i], 0.0, 1.0), normal(rng_[i], 0.0, 1.0),
                   normal(rng_[i], 0.0, 1.0));
          const double norm = dir.norm();
          if (norm > 1e-12)
            drift = dir / norm * config_.disturbance_gain * severity;
        }
      }
      position_[i] += (clamp_unit(a.tail<3>()) * config_.v_max + drift) *
                      config_.control_dt;

      if (!state_finite(env)) {
        result.outcomes.push_back({env, 0, true});
        result.done[i] = 1;
        ++result.faults;
        reset_env(env);
        continue;
      }

      const double d = rotation_distance(orientation_[i], goal_orientation_[i]);
      result.rewards[i] = compute_reward(
          d, position_[i], goal_position_[i], a, prev_action_[i], a,
          clamp_unit(a.head<3>()) * config_.omega_max * effort, config_.reward);
      prev_action_[i] = a;

      if ((position_[i] - goal_position_[i]).norm() >
          config_.protocol.fall_distance) {
        result.outcomes.push_back(
            {env, trackers_[i].consecutive_successes(), true});
        result.done[i] = 1;
        continue;
      }

      switch (trackers_[i].step(d)) {
        case SuccessTracker::Event::GoalReached:
          result.goal_reached[i] = 1;
          goal_orientation_[i] = resample_goal(rng_[i]).orientation;
          break;
        case SuccessTracker::Event::Stuck:
          result.outcomes.push_back(
              {env, trackers_[i].consecutive_successes(), true});
          result.done[i] = 1;
          break;
        case SuccessTracker::Event::None:
          break;
      }
    }
    return result;
  }

 private:
  static Vec3 clamp_unit(const Vec3& v) {
    return v.cwiseMax(-1.0).cwiseMin(1.0);
  }

  bool state_finite(int env) const {
    const auto i = static_cast<std::size_t>(env);
    return orientation_[i].coeffs().allFinite() && position_[i].allFinite();
  }

  EnvBatchConfig config_;
  std::vector<Quat> orientation_;
  std::vector<Vec3> position_;
  std::vector<Quat> goal_orientation_;
  std::vector<Vec3> goal_position_;
  std::vector<Eigen::VectorXd> prev_action_;
  std::vector<SuccessTracker> trackers_;
  std::vector<Rng> rng_;
};

}  // namespace vadr::env
