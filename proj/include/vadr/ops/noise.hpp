#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "vadr/rng.hpp"

namespace vadr::ops {

// Variance law for additive Gaussian noise; var(0) = 0 so a zero setting
// really is zero noise.
inline double noise_variance(double a) { return std::exp(a * a) - 1.0; }

inline double noise_stddev(double a) {
  return std::sqrt(std::max(0.0, noise_variance(a)));
}

// Correlated + uncorrelated additive Gaussian noise on a value stream:
// x -> x + delta + eps, where delta is fixed for the episode and eps is
// drawn every step.
class NoiseChannel {
 public:
  NoiseChannel() = default;
  NoiseChannel(int corr_adr_index, int uncorr_adr_index)
      : corr_index_(corr_adr_index), uncorr_index_(uncorr_adr_index) {}

  int corr_index() const { return corr_index_; }
  int uncorr_index() const { return uncorr_index_; }

  // Episode start: draw the correlated offset, one value per component.
  void reset(int width, double corr_level, Rng& rng) {
    delta_.resize(width);
    const double sd = noise_stddev(corr_level);
    for (int i = 0; i < width; ++i) delta_[i] = normal(rng, 0.0, sd);
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x, double uncorr_level,
                        Rng& rng) const {
    Eigen::VectorXd out = x;
    if (delta_.size() == x.size()) out += delta_;
    const double sd = noise_stddev(uncorr_level);
    if (sd > 0.0)
      for (Eigen::Index i = 0; i < out.size(); ++i)
        out[i] += normal(rng, 0.0, sd);
    return out;
  }

  const Eigen::VectorXd& delta() const { return delta_; }

 private:
  int corr_index_ = -1;
  int uncorr_index_ = -1;
  Eigen::VectorXd delta_;
};

}  // namespace vadr::ops
