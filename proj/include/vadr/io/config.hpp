#pragma once

#include <cinttypes>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "vadr/adr/defaults.hpp"
#include "vadr/adr/types.hpp"
#include "vadr/env/batch.hpp"
#include "vadr/io/ini.hpp"
#include "vadr/ops/ema.hpp"
#include "vadr/ops/pipeline.hpp"
#include "vadr/policy/synthetic.hpp"

namespace vadr::io {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

enum class ThresholdMode { Train, Test };

inline const char* to_string(ThresholdMode m) {
  return m == ThresholdMode::Train ? "train" : "test";
}

inline ThresholdMode threshold_mode_from_string(const std::string& s) {
  if (s == "train") return ThresholdMode::Train;
  if (s == "test") return ThresholdMode::Test;
  throw ConfigError("threshold_mode must be 'train' or 'test', got '" + s + "'");
}

// Everything that determines a run. Identical configs and seeds give
// byte-identical logs.
struct ExperimentConfig {
  // [run]
  std::uint64_t seed = 7;
  int num_envs = 256;
  long steps = 20000;
  std::string out_dir = "out";
  long record_interval = 200;

  // [env]
  double control_dt = 1.0 / 30.0;
  double omega_max = 2.0;
  double v_max = 0.3;
  double disturbance_gain = 0.04;
  double threshold_train = 0.1;
  double threshold_test = 0.4;
  ThresholdMode threshold_mode = ThresholdMode::Train;
  int frame_hold = 0;
  int stuck_timeout_steps = 2400;
  double fall_distance = 0.24;

  // [reward]
  env::RewardWeights reward;

  // [adr]
  adr::AdrConfig adr;

  // [policy]
  policy::SyntheticPolicy policy;
  policy::ImprovementSchedule improvement;
  std::map<std::string, double> sensitivity_by_name;

  // [pipeline]
  std::vector<ops::ObsStage> obs_chain = ops::PipelineConfig{}.obs_chain;
  std::vector<ops::ActionStage> action_chain =
      ops::PipelineConfig{}.action_chain;
  ops::EmaSchedule ema;
  int max_latency = 8;
  double workspace_half_extent = 0.05;
  ops::RandomNetworkAdversary::Options rna;

  double active_threshold() const {
    return threshold_mode == ThresholdMode::Train ? threshold_train
                                                  : threshold_test;
  }

  env::SuccessProtocol protocol() const {
    return {active_threshold(), frame_hold, stuck_timeout_steps, fall_distance};
  }

  env::EnvBatchConfig env_config() const {
    env::EnvBatchConfig c;
    c.num_envs = num_envs;
    c.control_dt = control_dt;
    c.omega_max = omega_max;
    c.v_max = v_max;
    c.disturbance_gain = disturbance_gain;
    c.protocol = protocol();
    c.reward = reward;
    c.effort_dim = adr.find_dimension("hand_effort");
    c.external_forces_dim = adr.find_dimension("object_external_forces");
    c.seed = seed;
    return c;
  }

  ops::PipelineConfig pipeline_config() const {
    ops::PipelineConfig c;
    c.obs_chain = obs_chain;
    c.action_chain = action_chain;
    c.bindings = ops::PipelineBindings::resolve(adr);
    c.obs_width = 11;
    c.action_width = env::kActionWidth;
    c.max_latency = max_latency;
    c.workspace_half_extent = workspace_half_extent;
    c.rna_seed = seed ^ 0x524e41ULL;
    c.rna = rna;
    return c;
  }

  policy::SyntheticPolicy resolved_policy() const {
    policy::SyntheticPolicy p = policy;
    p.sensitivity = Eigen::VectorXd::Zero(adr.num_dims());
    for (const auto& [name, weight] : sensitivity_by_name) {
      const int dim = adr.find_dimension(name);
      if (dim < 0)
        throw ConfigError("[policy] sensitivity references unknown dimension '" +
                          name + "'");
      p.sensitivity[dim] = weight;
    }
    p.validate(adr.num_dims());
    return p;
  }

  void validate() const {
    if (num_envs < 1) throw ConfigError("[run] num_envs must be >= 1");
    if (steps < 1) throw ConfigError("[run] steps must be >= 1");
    if (control_dt <= 0.0) throw ConfigError("[env] control_dt must be > 0");
    if (frame_hold < 0) throw ConfigError("[env] frame_hold must be >= 0");
    try {
      adr.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("[adr] ") + e.what());
    }
    resolved_policy();
  }
};

namespace detail {

inline std::vector<ops::ObsStage> parse_obs_chain(const std::string& raw) {
  std::vector<ops::ObsStage> out;
  std::istringstream in(raw);
  std::string tok;
  while (in >> tok) {
    if (tok == "gate") out.push_back(ops::ObsStage::Gate);
    else if (tok == "exp_delay") out.push_back(ops::ObsStage::ExponentialDelay);
    else if (tok == "inject") out.push_back(ops::ObsStage::Inject);
    else if (tok == "noise") out.push_back(ops::ObsStage::Noise);
    else throw ConfigError("[pipeline] unknown observation stage '" + tok + "'");
  }
  return out;
}

inline std::vector<ops::ActionStage> parse_action_chain(const std::string& raw) {
  std::vector<ops::ActionStage> out;
  std::istringstream in(raw);
  std::string tok;
  while (in >> tok) {
    if (tok == "rna_blend") out.push_back(ops::ActionStage::RnaBlend);
    else if (tok == "noise") out.push_back(ops::ActionStage::Noise);
    else if (tok == "latency") out.push_back(ops::ActionStage::Latency);
    else if (tok == "exp_delay") out.push_back(ops::ActionStage::ExponentialDelay);
    else if (tok == "ema") out.push_back(ops::ActionStage::Ema);
    else throw ConfigError("[pipeline] unknown action stage '" + tok + "'");
  }
  return out;
}

inline std::string chain_to_string(const std::vector<ops::ObsStage>& chain) {
  std::string out;
  for (auto s : chain) {
    if (!out.empty()) out += ' ';
    out += ops::to_string(s);
  }
  return out;
}

inline std::string chain_to_string(const std::vector<ops::ActionStage>& chain) {
  std::string out;
  for (auto s : chain) {
    if (!out.empty()) out += ' ';
    out += ops::to_string(s);
  }
  return out;
}

inline std::pair<double, double> parse_range(const std::string& section,
                                             const std::string& key,
                                             const std::string& raw) {
  std::istringstream in(raw);
  double lo = 0.0, hi = 0.0;
  if (in >> lo >> hi) {
    std::string rest;
    if (!(in >> rest)) return {lo, hi};
  }
  throw ConfigError("[" + section + "] key '" + key +
                    "': expected two numbers, got '" + raw + "'");
}

}  // namespace detail

inline ExperimentConfig config_from_ini(const IniFile& ini) {
  ExperimentConfig c;

  if (const IniSection* run = ini.find("run")) {
    c.seed = static_cast<std::uint64_t>(
        run->get_int_or("seed", static_cast<long>(c.seed)));
    c.num_envs = static_cast<int>(run->get_int_or("num_envs", c.num_envs));
    c.steps = run->get_int_or("steps", c.steps);
    c.out_dir = run->get_or("out_dir", c.out_dir);
    c.record_interval = run->get_int_or("record_interval", c.record_interval);
  }

  if (const IniSection* env = ini.find("env")) {
    c.control_dt = env->get_double_or("control_dt", c.control_dt);
    c.omega_max = env->get_double_or("omega_max", c.omega_max);
    c.v_max = env->get_double_or("v_max", c.v_max);
    c.disturbance_gain =
        env->get_double_or("disturbance_gain", c.disturbance_gain);
    c.threshold_train = env->get_double_or("threshold_train", c.threshold_train);
    c.threshold_test = env->get_double_or("threshold_test", c.threshold_test);
    c.threshold_mode = threshold_mode_from_string(
        env->get_or("threshold_mode", to_string(c.threshold_mode)));
    c.frame_hold = static_cast<int>(env->get_int_or("frame_hold", c.frame_hold));
    c.stuck_timeout_steps = static_cast<int>(
        env->get_int_or("stuck_timeout_steps", c.stuck_timeout_steps));
    c.fall_distance = env->get_double_or("fall_distance", c.fall_distance);
  }

  if (const IniSection* r = ini.find("reward")) {
    c.reward.rot_close = r->get_double_or("rot_close", c.reward.rot_close);
    c.reward.pos_dist = r->get_double_or("pos_dist", c.reward.pos_dist);
    c.reward.action_penalty =
        r->get_double_or("action_penalty", c.reward.action_penalty);
    c.reward.action_delta_penalty =
        r->get_double_or("action_delta_penalty", c.reward.action_delta_penalty);
    c.reward.joint_vel_penalty =
        r->get_double_or("joint_vel_penalty", c.reward.joint_vel_penalty);
    c.reward.reach_goal_bonus =
        r->get_double_or("reach_goal_bonus", c.reward.reach_goal_bonus);
    c.reward.bonus_threshold =
        r->get_double_or("bonus_threshold", c.reward.bonus_threshold);
  }

  if (const IniSection* a = ini.find("adr")) {
    c.adr.t_low = a->get_double_or("t_low", c.adr.t_low);
    c.adr.t_high = a->get_double_or("t_high", c.adr.t_high);
    c.adr.eval_fraction = a->get_double_or("eval_fraction", c.adr.eval_fraction);
    c.adr.queue_capacity = static_cast<int>(
        a->get_int_or("queue_capacity", c.adr.queue_capacity));
  }

  const auto dim_sections = ini.find_all("dimension");
  if (dim_sections.empty()) {
    c.adr.dimensions = adr::default_dimension_table();
  } else {
    for (const IniSection* s : dim_sections) {
      adr::DimensionSpec d;
      d.name = s->get("name");
      d.kind = adr::dimension_kind_from_string(s->get_or("kind", "scaling"));
      const auto init = detail::parse_range(s->name, "init", s->get("init"));
      d.init_lo = init.first;
      d.init_hi = init.second;
      const auto clamp = detail::parse_range(
          s->name, "clamp",
          s->get_or("clamp", s->get("init")));
      d.min_bound = clamp.first;
      d.max_bound = clamp.second;
      d.delta = s->get_double("delta");
      try {
        d.validate();
      } catch (const std::exception& e) {
        throw ConfigError(std::string("[dimension] ") + e.what());
      }
      c.adr.dimensions.push_back(d);
    }
  }

  if (const IniSection* p = ini.find("policy")) {
    c.policy.competence = p->get_double_or("competence", c.policy.competence);
    c.policy.kappa = p->get_double_or("kappa", c.policy.kappa);
    c.improvement.competence_rate =
        p->get_double_or("competence_rate", c.improvement.competence_rate);
    c.improvement.cap = p->get_double_or("competence_cap", c.improvement.cap);
    for (const auto& [key, value] : p->entries) {
      constexpr const char* prefix = "sensitivity.";
      if (key.rfind(prefix, 0) == 0)
        c.sensitivity_by_name[key.substr(std::string(prefix).size())] =
            IniSection::parse_double(p->name, key, value);
    }
  }

  if (const IniSection* p = ini.find("pipeline")) {
    if (const std::string* v = p->find("obs_chain"))
      c.obs_chain = detail::parse_obs_chain(*v);
    if (const std::string* v = p->find("action_chain"))
      c.action_chain = detail::parse_action_chain(*v);
    c.ema.train_start = p->get_double_or("ema_train_start", c.ema.train_start);
    c.ema.train_end = p->get_double_or("ema_train_end", c.ema.train_end);
    c.ema.deploy = p->get_double_or("ema_deploy", c.ema.deploy);
    c.max_latency = static_cast<int>(p->get_int_or("max_latency", c.max_latency));
    c.workspace_half_extent =
        p->get_double_or("workspace_half_extent", c.workspace_half_extent);
    c.rna.hidden_units =
        static_cast<int>(p->get_int_or("rna_hidden_units", c.rna.hidden_units));
    c.rna.mask_refresh_period = static_cast<int>(
        p->get_int_or("rna_mask_refresh", c.rna.mask_refresh_period));
    c.rna.keep_probability =
        p->get_double_or("rna_keep_probability", c.rna.keep_probability);
  }

  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  return config_from_ini(IniFile::load(path));
}

inline IniFile config_to_ini(const ExperimentConfig& c) {
  IniFile ini;
  auto& run = ini.add("run");
  run.set("seed", std::to_string(c.seed));
  run.set("num_envs", std::to_string(c.num_envs));
  run.set("steps", std::to_string(c.steps));
  run.set("out_dir", c.out_dir);
  run.set("record_interval", std::to_string(c.record_interval));

  auto& env = ini.add("env");
  env.set("control_dt", format_double(c.control_dt));
  env.set("omega_max", format_double(c.omega_max));
  env.set("v_max", format_double(c.v_max));
  env.set("disturbance_gain", format_double(c.disturbance_gain));
  env.set("threshold_train", format_double(c.threshold_train));
  env.set("threshold_test", format_double(c.threshold_test));
  env.set("threshold_mode", to_string(c.threshold_mode));
  env.set("frame_hold", std::to_string(c.frame_hold));
  env.set("stuck_timeout_steps", std::to_string(c.stuck_timeout_steps));
  env.set("fall_distance", format_double(c.fall_distance));

  auto& reward = ini.add("reward");
  reward.set("rot_close", format_double(c.reward.rot_close));
  reward.set("pos_dist", format_double(c.reward.pos_dist));
  reward.set("action_penalty", format_double(c.reward.action_penalty));
  reward.set("action_delta_penalty",
             format_double(c.reward.action_delta_penalty));
  reward.set("joint_vel_penalty", format_double(c.reward.joint_vel_penalty));
  reward.set("reach_goal_bonus", format_double(c.reward.reach_goal_bonus));
  reward.set("bonus_threshold", format_double(c.reward.bonus_threshold));

  auto& a = ini.add("adr");
  a.set("t_low", format_double(c.adr.t_low));
  a.set("t_high", format_double(c.adr.t_high));
  a.set("eval_fraction", format_double(c.adr.eval_fraction));
  a.set("queue_capacity", std::to_string(c.adr.queue_capacity));

  auto& p = ini.add("policy");
  p.set("competence", format_double(c.policy.competence));
  p.set("kappa", format_double(c.policy.kappa));
  p.set("competence_rate", format_double(c.improvement.competence_rate));
  p.set("competence_cap", format_double(c.improvement.cap));
  for (const auto& [name, weight] : c.sensitivity_by_name)
    p.set("sensitivity." + name, format_double(weight));

  auto& pipe = ini.add("pipeline");
  pipe.set("obs_chain", detail::chain_to_string(c.obs_chain));
  pipe.set("action_chain", detail::chain_to_string(c.action_chain));
  pipe.set("ema_train_start", format_double(c.ema.train_start));
  pipe.set("ema_train_end", format_double(c.ema.train_end));
  pipe.set("ema_deploy", format_double(c.ema.deploy));
  pipe.set("max_latency", std::to_string(c.max_latency));
  pipe.set("workspace_half_extent", format_double(c.workspace_half_extent));
  pipe.set("rna_hidden_units", std::to_string(c.rna.hidden_units));
  pipe.set("rna_mask_refresh", std::to_string(c.rna.mask_refresh_period));
  pipe.set("rna_keep_probability", format_double(c.rna.keep_probability));

  for (const auto& d : c.adr.dimensions) {
    auto& s = ini.add("dimension");
    s.set("name", d.name);
    s.set("kind", adr::to_string(d.kind));
    s.set("init", format_double(d.init_lo) + " " + format_double(d.init_hi));
    s.set("clamp",
          format_double(d.min_bound) + " " + format_double(d.max_bound));
    s.set("delta", format_double(d.delta));
  }
  return ini;
}

}  // namespace vadr::io
