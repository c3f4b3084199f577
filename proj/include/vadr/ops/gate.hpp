#pragma once

#include <cmath>
#include <stdexcept>

#include "vadr/rng.hpp"

namespace vadr::ops {

// Holds an observation between refreshes, mimicking an estimator running at
// 1/d of the control rate. Fresh exactly when (t + r) mod d == 0.
template <typename Sample>
class ObsRateGate {
 public:
  // Period from a continuous randomisation value: round with half-unit
  // jitter so fractional settings blend neighbouring integer periods.
  static int sample_period(double freq_value, Rng& rng) {
    const long d = std::lround(freq_value + uniform(rng, -0.5, 0.5));
    return static_cast<int>(std::max(1L, d));
  }

  void reset(int period, int phase, const Sample& initial) {
    if (period < 1) throw std::invalid_argument("gate period must be >= 1");
    if (phase < 0 || phase >= period)
      throw std::invalid_argument("gate phase outside [0, period)");
    d_ = period;
    r_ = phase;
    held_ = initial;
    primed_ = true;
  }

  void reset_random(double freq_value, const Sample& initial, Rng& rng) {
    const int d = sample_period(freq_value, rng);
    reset(d, uniform_int(rng, 0, d - 1), initial);
  }

  bool fresh_at(int t) const { return (t + r_) % d_ == 0; }

  Sample step(int t, const Sample& fresh) {
    if (!primed_) {
      held_ = fresh;
      primed_ = true;
    }
    if (fresh_at(t)) held_ = fresh;
    return held_;
  }

  int period() const { return d_; }
  int phase() const { return r_; }

 private:
  int d_ = 1;
  int r_ = 0;
  Sample held_{};
  bool primed_ = false;
};

}  // namespace vadr::ops
