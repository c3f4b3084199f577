#pragma once

#include <algorithm>
#include <stdexcept>

namespace vadr::env {

struct SuccessProtocol {
  double threshold = 0.1;        // radians: 0.1 during training, 0.4 in tests
  int frame_hold = 0;            // N consecutive in-threshold frames per goal
  int stuck_timeout_steps = 2400;  // 80 s at the 30 Hz control rate
  double fall_distance = 0.24;   // meters from the goal position

  void validate() const {
    if (threshold <= 0.0) throw std::invalid_argument("threshold <= 0");
    if (frame_hold < 0) throw std::invalid_argument("frame_hold < 0");
    if (stuck_timeout_steps < 1)
      throw std::invalid_argument("stuck_timeout_steps < 1");
    if (fall_distance <= 0.0) throw std::invalid_argument("fall_distance <= 0");
  }

  // N = 0 is plain goal reaching: one in-threshold frame suffices.
  int required_frames() const { return std::max(1, frame_hold); }
};

// Per-environment success/stuck bookkeeping. Feed one orientation distance
// per control step; the frame counter resets whenever the distance leaves
// the threshold.
class SuccessTracker {
 public:
  enum class Event { None, GoalReached, Stuck };

  explicit SuccessTracker(const SuccessProtocol& protocol = {})
      : protocol_(protocol) {}

  void reset() {
    frames_in_threshold_ = 0;
    steps_since_success_ = 0;
    consecutive_ = 0;
  }

  Event step(double rotation_dist) {
    if (rotation_dist < protocol_.threshold)
      ++frames_in_threshold_;
    else
      frames_in_threshold_ = 0;
    ++steps_since_success_;

    if (frames_in_threshold_ >= protocol_.required_frames()) {
      ++consecutive_;
      frames_in_threshold_ = 0;
      steps_since_success_ = 0;
      return Event::GoalReached;
    }
    if (steps_since_success_ >= protocol_.stuck_timeout_steps)
      return Event::Stuck;
    return Event::None;
  }

  int consecutive_successes() const { return consecutive_; }
  int frames_in_threshold() const { return frames_in_threshold_; }
  int steps_since_success() const { return steps_since_success_; }
  const SuccessProtocol& protocol() const { return protocol_; }

 private:
  SuccessProtocol protocol_;
  int frames_in_threshold_ = 0;
  int steps_since_success_ = 0;
  int consecutive_ = 0;
};

}  // namespace vadr::env
