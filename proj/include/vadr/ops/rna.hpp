#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vadr/rng.hpp"

namespace vadr::ops {

// A single fixed random network shared across all environments; each env
// gets its own periodically refreshed dropout mask over the hidden layer.
// The masked output models structured, state-varying disturbances and is
// blended into the policy action: a = alpha * a_rna + (1 - alpha) * a_policy.
class RandomNetworkAdversary {
 public:
  struct Options {
    int hidden_units = 256;
    int mask_refresh_period = 720;  // steps between dropout refreshes
    double keep_probability = 0.5;
  };

  RandomNetworkAdversary(int obs_width, int action_width, int num_envs,
                         std::uint64_t seed, Options options = {})
      : obs_width_(obs_width),
        action_width_(action_width),
        options_(options),
        masks_(num_envs) {
    if (obs_width < 1 || action_width < 1 || num_envs < 1)
      throw std::invalid_argument("RNA sizes must be positive");
    Rng rng = make_rng(seed);
    const int h = options_.hidden_units;
    w1_ = gaussian_matrix(h, obs_width_, rng);
    b1_ = Eigen::VectorXd::Zero(h);
    w2_ = gaussian_matrix(action_width_, h, rng);
    b2_ = Eigen::VectorXd::Zero(action_width_);
    mask_rng_ = make_stream(seed, 1);
    for (auto& m : masks_) m = draw_mask();
  }

  void maybe_refresh_masks(long step) {
    if (step > 0 && step % options_.mask_refresh_period == 0)
      for (auto& m : masks_) m = draw_mask();
  }

  // Deterministic given (weights, mask, obs); output bounded to [-1, 1].
  Eigen::VectorXd forward(int env, const Eigen::VectorXd& obs) const {
    if (obs.size() != obs_width_)
      throw std::invalid_argument("RNA observation width mismatch");
    const auto& mask = masks_[static_cast<std::size_t>(env)];
    Eigen::VectorXd h = (w1_ * obs + b1_).cwiseMax(0.0);
    h = h.cwiseProduct(mask);
    return (w2_ * h + b2_).array().tanh().matrix();
  }

  Eigen::VectorXd blend(int env, const Eigen::VectorXd& obs,
                        const Eigen::VectorXd& a_policy, double alpha) const {
    if (alpha < 0.0 || alpha > 1.0)
      throw std::invalid_argument("RNA alpha outside [0, 1]");
    if (alpha == 0.0) return a_policy;
    const Eigen::VectorXd a_rna = forward(env, obs);
    return alpha * a_rna + (1.0 - alpha) * a_policy;
  }

  const Eigen::VectorXd& mask(int env) const {
    return masks_[static_cast<std::size_t>(env)];
  }

 private:
  Eigen::MatrixXd gaussian_matrix(int rows, int cols, Rng& rng) {
    const double sd = 1.0 / std::sqrt(static_cast<double>(cols));
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = normal(rng, 0.0, sd);
    return m;
  }

  Eigen::VectorXd draw_mask() {
    Eigen::VectorXd m(options_.hidden_units);
    for (int i = 0; i < options_.hidden_units; ++i)
      m[i] = bernoulli(mask_rng_, options_.keep_probability) ? 1.0 : 0.0;
    return m;
  }

  int obs_width_;
  int action_width_;
  Options options_;
  Eigen::MatrixXd w1_, w2_;
  Eigen::VectorXd b1_, b2_;
  std::vector<Eigen::VectorXd> masks_;
  Rng mask_rng_;
};

}  // namespace vadr::ops
