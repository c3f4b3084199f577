#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace vadr::ops {

// Low-pass action filter: y_t = factor * x_t + (1 - factor) * y_{t-1}.
class EmaFilter {
 public:
  void reset(const Eigen::VectorXd& initial) {
    state_ = initial;
    primed_ = true;
  }

  Eigen::VectorXd step(const Eigen::VectorXd& x, double factor) {
    if (factor <= 0.0 || factor > 1.0)
      throw std::invalid_argument("EMA factor must be in (0, 1]");
    if (!primed_) {
      state_ = Eigen::VectorXd::Zero(x.size());
      primed_ = true;
    }
    state_ = factor * x + (1.0 - factor) * state_;
    return state_;
  }

  const Eigen::VectorXd& state() const { return state_; }

 private:
  Eigen::VectorXd state_;
  bool primed_ = false;
};

// Training anneal for the smoothing factor, with a fixed deploy value.
struct EmaSchedule {
  double train_start = 0.2;
  double train_end = 0.15;
  double deploy = 0.1;

  // progress in [0, 1] over the training run
  double factor(double progress) const {
    const double t = std::clamp(progress, 0.0, 1.0);
    return train_start + (train_end - train_start) * t;
  }
};

}  // namespace vadr::ops
