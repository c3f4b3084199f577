#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vadr/adr/engine.hpp"
#include "vadr/ops/delay.hpp"
#include "vadr/ops/ema.hpp"
#include "vadr/ops/gate.hpp"
#include "vadr/ops/inject.hpp"
#include "vadr/ops/noise.hpp"
#include "vadr/ops/rna.hpp"
#include "vadr/pose.hpp"

namespace vadr::ops {

enum class ObsStage { Gate, ExponentialDelay, Inject, Noise };
enum class ActionStage { RnaBlend, Noise, Latency, ExponentialDelay, Ema };

inline const char* to_string(ObsStage s) {
  switch (s) {
    case ObsStage::Gate: return "gate";
    case ObsStage::ExponentialDelay: return "exp_delay";
    case ObsStage::Inject: return "inject";
    case ObsStage::Noise: return "noise";
  }
  return "?";
}

inline const char* to_string(ActionStage s) {
  switch (s) {
    case ActionStage::RnaBlend: return "rna_blend";
    case ActionStage::Noise: return "noise";
    case ActionStage::Latency: return "latency";
    case ActionStage::ExponentialDelay: return "exp_delay";
    case ActionStage::Ema: return "ema";
  }
  return "?";
}

// ADR dimension indices used by each stage; -1 leaves a stage at its neutral
// setting.
struct PipelineBindings {
  int obs_pose_freq = -1;
  int obs_delay_prob = -1;
  int pose_injection = -1;
  int obs_corr_noise = -1;
  int obs_uncorr_noise = -1;
  int rna_alpha = -1;
  int action_corr_noise = -1;
  int action_uncorr_noise = -1;
  int action_latency = -1;
  int action_delay_prob = -1;

  static PipelineBindings resolve(const adr::AdrConfig& config) {
    PipelineBindings b;
    b.obs_pose_freq = config.find_dimension("obs_pose_freq");
    b.obs_delay_prob = config.find_dimension("obs_pose_delay_prob");
    b.pose_injection = config.find_dimension("random_pose_injection");
    b.obs_corr_noise = config.find_dimension("obs_corr_noise");
    b.obs_uncorr_noise = config.find_dimension("obs_uncorr_noise");
    b.rna_alpha = config.find_dimension("rna_alpha");
    b.action_corr_noise = config.find_dimension("action_corr_noise");
    b.action_uncorr_noise = config.find_dimension("action_uncorr_noise");
    b.action_latency = config.find_dimension("action_latency");
    b.action_delay_prob = config.find_dimension("action_delay_prob");
    return b;
  }
};

struct PipelineConfig {
  std::vector<ObsStage> obs_chain{ObsStage::Gate, ObsStage::ExponentialDelay,
                                  ObsStage::Inject, ObsStage::Noise};
  std::vector<ActionStage> action_chain{
      ActionStage::RnaBlend, ActionStage::Noise, ActionStage::Latency,
      ActionStage::ExponentialDelay, ActionStage::Ema};
  PipelineBindings bindings;
  int obs_width = 11;    // RNA input width
  int action_width = 6;
  int max_latency = 8;
  double workspace_half_extent = 0.05;
  std::uint64_t rna_seed = 0;
  RandomNetworkAdversary::Options rna;
};

inline Eigen::VectorXd pose_to_vector(const Pose& p) {
  Eigen::VectorXd v(7);
  v << p.orientation.w(), p.orientation.x(), p.orientation.y(),
      p.orientation.z(), p.position.x(), p.position.y(), p.position.z();
  return v;
}

inline Pose pose_from_vector(const Eigen::VectorXd& v) {
  Pose p;
  p.orientation = Quat(v[0], v[1], v[2], v[3]).normalized();
  p.position = Vec3(v[4], v[5], v[6]);
  return p;
}

// Ordered operator chains over per-environment observation and action
// streams. All per-episode constants are resampled in reset_env only.
class RandomisationPipeline {
 public:
  RandomisationPipeline(PipelineConfig config, int num_envs)
      : config_(std::move(config)), envs_(static_cast<std::size_t>(num_envs)) {
    if (num_envs < 1) throw std::invalid_argument("num_envs < 1");
    for (auto& e : envs_) {
      e.latency = ActionLatencyBuffer(config_.action_width, config_.max_latency);
      e.injector = PoseInjector(config_.workspace_half_extent);
    }
    if (uses_rna())
      rna_ = std::make_unique<RandomNetworkAdversary>(
          config_.obs_width, config_.action_width, num_envs, config_.rna_seed,
          config_.rna);
  }

  const PipelineConfig& config() const { return config_; }

  bool uses_rna() const {
    for (auto s : config_.action_chain)
      if (s == ActionStage::RnaBlend) return true;
    return false;
  }

  // Episode start: draw every per-episode constant for this env.
  void reset_env(int env, const adr::AdrEnvAssignment& assignment,
                 const Pose& initial_pose, Rng& rng) {
    EnvState& e = envs_.at(static_cast<std::size_t>(env));
    const auto& b = config_.bindings;

    e.gate.reset_random(value_or(assignment, env, b.obs_pose_freq, 1.0),
                        initial_pose, rng);
    e.obs_delay.reset(initial_pose);
    e.injector.reset(value_or(assignment, env, b.pose_injection, 0.0), rng);
    e.obs_noise.reset(7, value_or(assignment, env, b.obs_corr_noise, 0.0), rng);

    e.action_noise.reset(config_.action_width,
                         value_or(assignment, env, b.action_corr_noise, 0.0),
                         rng);
    const double latency_value =
        std::min<double>(value_or(assignment, env, b.action_latency, 0.0),
                         static_cast<double>(config_.max_latency));
    e.latency.reset(
        std::min(config_.max_latency, sample_latency(latency_value, rng)));
    e.action_delay.reset(Eigen::VectorXd::Zero(config_.action_width));
    e.ema.reset(Eigen::VectorXd::Zero(config_.action_width));
    e.t = 0;
  }

  // Refresh shared per-env RNA dropout masks on the global step clock.
  void begin_step(long global_step) {
    if (rna_) rna_->maybe_refresh_masks(global_step);
  }

  Pose observe(int env, const Pose& true_pose,
               const adr::AdrEnvAssignment& assignment, Rng& rng) {
    EnvState& e = envs_.at(static_cast<std::size_t>(env));
    const auto& b = config_.bindings;
    Pose pose = true_pose;
    for (ObsStage stage : config_.obs_chain) {
      switch (stage) {
        case ObsStage::Gate:
          pose = e.gate.step(e.t, pose);
          break;
        case ObsStage::ExponentialDelay:
          pose = e.obs_delay.step(
              pose, value_or(assignment, env, b.obs_delay_prob, 0.0), rng);
          break;
        case ObsStage::Inject:
          pose = e.injector.step(pose, rng);
          break;
        case ObsStage::Noise: {
          const double uncorr =
              value_or(assignment, env, b.obs_uncorr_noise, 0.0);
          if (uncorr > 0.0 || e.obs_noise.delta().squaredNorm() > 0.0)
            pose = pose_from_vector(
                e.obs_noise.apply(pose_to_vector(pose), uncorr, rng));
          break;
        }
      }
    }
    ++e.t;
    return pose;
  }

  Eigen::VectorXd act(int env, const Eigen::VectorXd& policy_action,
                      const Eigen::VectorXd& obs_vector,
                      const adr::AdrEnvAssignment& assignment,
                      double ema_factor, Rng& rng) {
    EnvState& e = envs_.at(static_cast<std::size_t>(env));
    const auto& b = config_.bindings;
    Eigen::VectorXd a = policy_action;
    for (ActionStage stage : config_.action_chain) {
      switch (stage) {
        case ActionStage::RnaBlend:
          if (rna_)
            a = rna_->blend(env, obs_vector, a,
                            value_or(assignment, env, b.rna_alpha, 0.0));
          break;
        case ActionStage::Noise: {
          const double uncorr =
              value_or(assignment, env, b.action_uncorr_noise, 0.0);
          if (uncorr > 0.0 || e.action_noise.delta().squaredNorm() > 0.0)
            a = e.action_noise.apply(a, uncorr, rng);
          break;
        }
        case ActionStage::Latency:
          a = e.latency.push(a);
          break;
        case ActionStage::ExponentialDelay:
          a = e.action_delay.step(
              a, value_or(assignment, env, b.action_delay_prob, 0.0), rng);
          break;
        case ActionStage::Ema:
          a = e.ema.step(a, ema_factor);
          break;
      }
    }
    return a;
  }

  std::string describe() const {
    std::ostringstream out;
    const auto& b = config_.bindings;
    out << "observation chain:";
    for (auto s : config_.obs_chain) {
      out << " " << to_string(s) << "(";
      switch (s) {
        case ObsStage::Gate: out << "dim=" << b.obs_pose_freq; break;
        case ObsStage::ExponentialDelay: out << "dim=" << b.obs_delay_prob; break;
        case ObsStage::Inject: out << "dim=" << b.pose_injection; break;
        case ObsStage::Noise:
          out << "corr=" << b.obs_corr_noise << ",uncorr=" << b.obs_uncorr_noise;
          break;
      }
      out << ")";
    }
    out << "\naction chain:";
    for (auto s : config_.action_chain) {
      out << " " << to_string(s) << "(";
      switch (s) {
        case ActionStage::RnaBlend: out << "dim=" << b.rna_alpha; break;
        case ActionStage::Noise:
          out << "corr=" << b.action_corr_noise
              << ",uncorr=" << b.action_uncorr_noise;
          break;
        case ActionStage::Latency: out << "dim=" << b.action_latency; break;
        case ActionStage::ExponentialDelay:
          out << "dim=" << b.action_delay_prob;
          break;
        case ActionStage::Ema: out << "schedule"; break;
      }
      out << ")";
    }
    out << "\n";
    return out.str();
  }

  const RandomNetworkAdversary* rna() const { return rna_.get(); }
  int latency_of(int env) const {
    return envs_.at(static_cast<std::size_t>(env)).latency.latency();
  }
  int gate_period_of(int env) const {
    return envs_.at(static_cast<std::size_t>(env)).gate.period();
  }

 private:
  static double value_or(const adr::AdrEnvAssignment& assignment, int env,
                         int dim, double fallback) {
    if (dim < 0) return fallback;
    return assignment.value(env, dim);
  }

  struct EnvState {
    ObsRateGate<Pose> gate;
    ExponentialDelayLine<Pose> obs_delay;
    PoseInjector injector;
    NoiseChannel obs_noise;
    NoiseChannel action_noise;
    ActionLatencyBuffer latency;
    ExponentialDelayLine<Eigen::VectorXd> action_delay;
    EmaFilter ema;
    int t = 0;
  };

  PipelineConfig config_;
  std::vector<EnvState> envs_;
  std::unique_ptr<RandomNetworkAdversary> rna_;
};

}  // namespace vadr::ops
