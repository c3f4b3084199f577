#pragma once

#include "vadr/adr/types.hpp"
#include "vadr/quat.hpp"
#include "vadr/rng.hpp"

namespace vadr::ops {

// Application semantics of a sampled randomisation value to a nominal
// physics parameter.
struct PhysicsParamBinding {
  double nominal = 0.0;
  adr::DimensionKind kind = adr::DimensionKind::Scaling;

  double apply(double sampled) const {
    switch (kind) {
      case adr::DimensionKind::Scaling: return nominal * sampled;
      case adr::DimensionKind::Additive: return nominal + sampled;
      case adr::DimensionKind::SetValue: return sampled;
    }
    return sampled;
  }
};

// Gravity is global to the batch: additive N(0, sigma) per coordinate,
// held constant for `period` steps and redrawn at multiples of it.
class GravityResampler {
 public:
  explicit GravityResampler(Vec3 nominal = Vec3(0.0, 0.0, -9.81),
                            double sigma = 0.5, int period = 720)
      : nominal_(nominal), sigma_(sigma), period_(period), current_(nominal) {}

  const Vec3& update(long step, Rng& rng) {
    if (step % period_ == 0) {
      for (int i = 0; i < 3; ++i)
        current_[i] = nominal_[i] + normal(rng, 0.0, sigma_);
    }
    return current_;
  }

  const Vec3& current() const { return current_; }
  int period() const { return period_; }

 private:
  Vec3 nominal_;
  double sigma_;
  int period_;
  Vec3 current_;
};

}  // namespace vadr::ops
