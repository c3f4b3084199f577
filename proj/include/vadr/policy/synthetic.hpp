#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vadr/adr/types.hpp"
#include "vadr/env/batch.hpp"
#include "vadr/pose.hpp"
#include "vadr/quat.hpp"
#include "vadr/rng.hpp"

namespace vadr::policy {

// Analytic stand-in for a trained controller. Its per-goal success
// probability is a known function of the sampled randomisation values:
//   q = logistic(kappa * (competence - w . severity)),
// which makes converged curriculum bounds verifiable in closed form.
struct SyntheticPolicy {
  double competence = 0.5;
  double kappa = 4.0;
  Eigen::VectorXd sensitivity;  // one non-negative weight per dimension

  void validate(int num_dims) const {
    if (competence < 0.0 || competence > 1.0)
      throw std::invalid_argument("competence outside [0, 1]");
    if (kappa <= 0.0) throw std::invalid_argument("kappa must be > 0");
    if (sensitivity.size() != num_dims)
      throw std::invalid_argument("sensitivity width != dimension count");
    if ((sensitivity.array() < 0.0).any())
      throw std::invalid_argument("sensitivity weights must be >= 0");
  }
};

struct ImprovementSchedule {
  double competence_rate = 0.0;  // per improve() call
  double cap = 1.0;
};

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Normalised distance of one sampled value from the dimension's nominal.
inline double severity(const adr::DimensionSpec& dim, double sampled) {
  const double width = dim.max_bound - dim.min_bound;
  if (width < 1e-12) return 0.0;
  return std::abs(sampled - dim.nominal()) / width;
}

inline Eigen::VectorXd severity_vector(const adr::AdrConfig& config,
                                       const adr::AdrEnvAssignment& assignment,
                                       int env) {
  const int d = config.num_dims();
  Eigen::VectorXd s(d);
  for (int n = 0; n < d; ++n)
    s[n] = severity(config.dimensions[static_cast<std::size_t>(n)],
                    assignment.value(env, n));
  return s;
}

inline double success_probability(const SyntheticPolicy& policy,
                                  const Eigen::VectorXd& severities) {
  const double load = policy.sensitivity.dot(severities);
  return logistic(policy.kappa * (policy.competence - load));
}

// Mean episode length of the geometric success model: each goal succeeds
// independently with probability q and the episode ends on the first miss.
inline double expected_consecutive_successes(double q) {
  if (!(q >= 0.0 && q < 1.0))
    throw std::domain_error("q must lie in [0, 1); the mean diverges at 1");
  return q / (1.0 - q);
}

inline SyntheticPolicy improve(SyntheticPolicy policy,
                               const ImprovementSchedule& schedule) {
  policy.competence =
      std::min(schedule.cap, policy.competence + schedule.competence_rate);
  return policy;
}

// Per-environment controller state: one success/fail draw per goal attempt.
// Failing attempts steer with zero-mean rotation noise and walk the cube out
// of the workspace along a direction fixed for the attempt.
class PolicyBatch {
 public:
  PolicyBatch(SyntheticPolicy policy, int num_envs, std::uint64_t seed)
      : policy_(std::move(policy)),
        fail_mode_(static_cast<std::size_t>(num_envs), 0),
        fail_dir_(static_cast<std::size_t>(num_envs), Vec3::UnitX()) {
    rng_.reserve(static_cast<std::size_t>(num_envs));
    for (int i = 0; i < num_envs; ++i)
      rng_.push_back(make_stream(seed, static_cast<std::uint64_t>(i)));
  }

  const SyntheticPolicy& policy() const { return policy_; }
  void set_policy(SyntheticPolicy p) { policy_ = std::move(p); }

  // Called at episode start and after every reached goal.
  void begin_goal(int env, const adr::AdrConfig& config,
                  const adr::AdrEnvAssignment& assignment) {
    const auto i = static_cast<std::size_t>(env);
    const double q = success_probability(
        policy_, severity_vector(config, assignment, env));
    fail_mode_[i] = bernoulli(rng_[i], q) ? 0 : 1;
    if (fail_mode_[i]) {
      Vec3 dir(normal(rng_[i], 0.0, 1.0), normal(rng_[i], 0.0, 1.0),
               normal(rng_[i], 0.0, 1.0));
      fail_dir_[i] = dir.norm() > 1e-12 ? Vec3(dir.normalized()) : Vec3::UnitX();
    }
  }

  // Geodesic angular-velocity command toward the observed goal plus
  // recentring; on a failing attempt the rotation command is replaced by
  // zero-mean noise and the recentring channel walks outward.
  Eigen::VectorXd act(int env, const Pose& observed, const Quat& goal,
                      const env::EnvBatchConfig& env_config) {
    const auto i = static_cast<std::size_t>(env);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(env::kActionWidth);
    if (!fail_mode_[i]) {
      const Vec3 rot = rotation_vector_to(observed.orientation, goal);
      const double step_budget = env_config.omega_max * env_config.control_dt;
      const Vec3 cmd = rot / (step_budget * 4.0);  // conservative gain
      a.head<3>() = cmd.cwiseMax(-1.0).cwiseMin(1.0);
      const Vec3 recenter = -observed.position / (env_config.v_max *
                                                  env_config.control_dt);
      a.tail<3>() = recenter.cwiseMax(-1.0).cwiseMin(1.0);
    } else {
      for (int k = 0; k < 3; ++k) a[k] = uniform(rng_[i], -1.0, 1.0);
      a.tail<3>() = fail_dir_[i];
    }
    return a;
  }

  bool failing(int env) const {
    return fail_mode_[static_cast<std::size_t>(env)] != 0;
  }

 private:
  SyntheticPolicy policy_;
  std::vector<std::uint8_t> fail_mode_;
  std::vector<Vec3> fail_dir_;
  std::vector<Rng> rng_;
};

}  // namespace vadr::policy
