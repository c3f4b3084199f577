#pragma once

#include <vector>

#include "vadr/adr/types.hpp"

namespace vadr::adr {

// Default randomisation dimension table. Initial ranges follow the published
// calibration for in-hand cube reorientation; hard clamps and per-dimension
// steps are artifact defaults (dimensions whose clamps equal the initial
// range are fixed and can never be moved by the curriculum).
inline std::vector<DimensionSpec> default_dimension_table() {
  using K = DimensionKind;
  return {
      // name                      kind         init_lo init_hi min    max    delta
      {"hand_mass",                K::Scaling,  0.40,   1.50,   0.40,  1.50,  0.01},
      {"hand_scale",               K::Scaling,  0.95,   1.05,   0.95,  1.05,  0.01},
      {"hand_friction",            K::Scaling,  0.80,   1.20,   0.10,  2.00,  0.02},
      {"hand_armature",            K::Scaling,  0.80,   1.02,   0.10,  2.00,  0.02},
      {"hand_effort",              K::Scaling,  0.90,   1.10,   0.50,  3.00,  0.02},
      {"hand_joint_stiffness",     K::Scaling,  0.30,   3.00,   0.10,  4.00,  0.05},
      {"hand_joint_damping",       K::Scaling,  0.75,   1.50,   0.30,  2.00,  0.02},
      {"hand_restitution",         K::Additive, 0.00,   0.40,   0.00,  0.50,  0.01},
      {"object_mass",              K::Scaling,  0.40,   1.60,   0.40,  1.60,  0.01},
      {"object_friction",          K::Scaling,  0.30,   0.90,   0.01,  2.00,  0.02},
      {"object_scale",             K::Scaling,  0.95,   1.05,   0.95,  1.05,  0.01},
      {"object_external_forces",   K::Additive, 0.00,   0.00,   0.00,  1.00,  0.02},
      {"object_restitution",       K::Additive, 0.00,   0.40,   0.00,  0.50,  0.01},
      {"obs_pose_delay_prob",      K::SetValue, 0.00,   0.05,   0.00,  0.95,  0.01},
      {"obs_pose_freq",            K::SetValue, 1.00,   1.00,   1.00,  6.00,  0.05},
      {"obs_corr_noise",           K::Additive, 0.00,   0.04,   0.00,  0.50,  0.01},
      {"obs_uncorr_noise",         K::Additive, 0.00,   0.04,   0.00,  0.50,  0.01},
      {"random_pose_injection",    K::SetValue, 0.30,   0.30,   0.30,  0.30,  0.01},
      {"action_delay_prob",        K::SetValue, 0.00,   0.05,   0.00,  0.95,  0.01},
      {"action_latency",           K::SetValue, 0.00,   0.00,   0.00,  3.00,  0.05},
      {"action_corr_noise",        K::Additive, 0.00,   0.04,   0.00,  0.60,  0.01},
      {"action_uncorr_noise",      K::Additive, 0.00,   0.04,   0.00,  0.60,  0.01},
      {"rna_alpha",                K::SetValue, 0.00,   0.00,   0.00,  0.30,  0.01},
      {"gravity_noise_std",        K::Additive, 0.00,   0.50,   0.00,  0.50,  0.01},
  };
}

}  // namespace vadr::adr
