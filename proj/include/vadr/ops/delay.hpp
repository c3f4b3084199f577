#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vadr/rng.hpp"

namespace vadr::ops {

// Random jitter in delivery latency: each step the previous output is held
// with probability p, i.e. f(x; x_last) = x_last * d + x * (1 - d),
// d ~ Bern(p).
template <typename Sample>
class ExponentialDelayLine {
 public:
  void reset(const Sample& initial) {
    last_ = initial;
    primed_ = true;
  }

  Sample step(const Sample& x, double p, Rng& rng) {
    if (!primed_) reset(x);
    const bool hold = bernoulli(rng, p);
    if (!hold) last_ = x;
    return last_;
  }

  // Deterministic variant used by tests to force the Bernoulli draw.
  Sample step_forced(const Sample& x, bool hold) {
    if (!primed_) reset(x);
    if (!hold) last_ = x;
    return last_;
  }

  bool primed() const { return primed_; }
  const Sample& held() const { return last_; }

 private:
  Sample last_{};
  bool primed_ = false;
};

// Per-episode integer delay: k = round(u1 + u2), u1 ~ U(0, b),
// u2 ~ U(-0.5, 0.5), clamped at 0. The half-unit jitter blends neighbouring
// integer delays when b sits between them.
inline int sample_latency(double b, Rng& rng) {
  if (b < 0.0) throw std::invalid_argument("latency bound must be >= 0");
  const double u1 = (b > 0.0) ? uniform(rng, 0.0, b) : 0.0;
  const double u2 = uniform(rng, -0.5, 0.5);
  const long k = std::lround(u1 + u2);
  return static_cast<int>(std::max(0L, k));
}

// Executes the policy action from k steps ago; zero-filled before step k.
class ActionLatencyBuffer {
 public:
  explicit ActionLatencyBuffer(int action_width = 0, int max_latency = 8)
      : width_(action_width), max_latency_(max_latency) {
    if (max_latency < 0) throw std::invalid_argument("max_latency < 0");
    ring_.assign(static_cast<std::size_t>(max_latency_ + 1),
                 Eigen::VectorXd::Zero(width_));
  }

  void reset(int k) {
    if (k < 0 || k > max_latency_)
      throw std::invalid_argument("latency outside [0, max_latency]");
    k_ = k;
    t_ = 0;
    for (auto& a : ring_) a.setZero(width_);
  }

  int latency() const { return k_; }

  Eigen::VectorXd push(const Eigen::VectorXd& action) {
    if (action.size() != width_)
      throw std::invalid_argument("action width mismatch");
    ring_[static_cast<std::size_t>(t_ % (max_latency_ + 1))] = action;
    Eigen::VectorXd out;
    if (t_ < k_)
      out = Eigen::VectorXd::Zero(width_);
    else
      out = ring_[static_cast<std::size_t>((t_ - k_) % (max_latency_ + 1))];
    ++t_;
    return out;
  }

 private:
  int width_ = 0;
  int max_latency_ = 8;
  int k_ = 0;
  int t_ = 0;
  std::vector<Eigen::VectorXd> ring_;
};

}  // namespace vadr::ops
