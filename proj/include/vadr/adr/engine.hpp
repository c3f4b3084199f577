#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "vadr/adr/types.hpp"
#include "vadr/rng.hpp"

namespace vadr::adr {

inline constexpr double kNpdWidthFloor = 1e-12;

// Mean log-width across all ranges; zero widths are floored to keep it finite.
inline double npd(std::span<const double> bounds) {
  if (bounds.empty() || bounds.size() % 2 != 0)
    throw std::invalid_argument("bounds must hold 2 entries per dimension");
  const std::size_t dims = bounds.size() / 2;
  double sum = 0.0;
  for (std::size_t n = 0; n < dims; ++n) {
    const double width = bounds[2 * n + 1] - bounds[2 * n];
    sum += std::log(std::max(width, kNpdWidthFloor));
  }
  return sum / static_cast<double>(dims);
}

struct BoundaryEvent {
  int dimension = 0;
  int boundary = 0;  // 2n lower, 2n+1 upper
  double queue_mean = 0.0;
  double old_value = 0.0;
  double new_value = 0.0;
};

// Boundary state, per-boundary success queues, and env assignments for one
// independent randomisation curriculum. Single writer; update/reset are
// sequential transactions. Two instances never share state.
class AdrState {
 public:
  AdrState(AdrConfig config, int num_envs, Rng& rng)
      : config_(std::move(config)) {
    config_.validate();
    if (num_envs < 1) throw std::invalid_argument("num_envs < 1");
    const int d = config_.num_dims();
    bounds_.resize(static_cast<std::size_t>(2 * d));
    for (int n = 0; n < d; ++n) {
      const auto& dim = config_.dimensions[static_cast<std::size_t>(n)];
      bounds_[static_cast<std::size_t>(2 * n)] = dim.init_lo;
      bounds_[static_cast<std::size_t>(2 * n + 1)] = dim.init_hi;
    }
    queues_.assign(static_cast<std::size_t>(2 * d),
                   BoundaryQueue(config_.queue_capacity));
    assignment_.num_dims = d;
    assignment_.modes.assign(static_cast<std::size_t>(num_envs), -1);
    assignment_.values.assign(
        static_cast<std::size_t>(num_envs) * static_cast<std::size_t>(d), 0.0);
    std::vector<std::uint8_t> all(static_cast<std::size_t>(num_envs), 1);
    reset_values(all, rng);
  }

  const AdrConfig& config() const { return config_; }
  int num_dims() const { return config_.num_dims(); }
  int num_envs() const { return assignment_.num_envs(); }
  const std::vector<double>& bounds() const { return bounds_; }
  double lower(int dim) const { return bounds_[static_cast<std::size_t>(2 * dim)]; }
  double upper(int dim) const {
    return bounds_[static_cast<std::size_t>(2 * dim + 1)];
  }
  const BoundaryQueue& queue(int boundary) const {
    return queues_[static_cast<std::size_t>(boundary)];
  }
  const AdrEnvAssignment& assignment() const { return assignment_; }
  double npd() const { return adr::npd(bounds_); }

  // Appends each pinned environment's episode-final count to its boundary
  // queue, then applies the widen/tighten rules to every full queue. A
  // boundary whose value changed has its queue cleared.
  std::vector<BoundaryEvent> update(std::span<const EpisodeOutcome> outcomes) {
    for (const auto& o : outcomes) {
      if (o.env_index < 0 || o.env_index >= num_envs())
        throw std::out_of_range("episode outcome for unknown env index " +
                                std::to_string(o.env_index));
      if (!o.done)
        throw std::invalid_argument("episode outcome submitted before done");
      if (o.consecutive_successes < 0)
        throw std::invalid_argument("negative consecutive success count");
    }
    for (const auto& o : outcomes) {
      const int mode = assignment_.modes[static_cast<std::size_t>(o.env_index)];
      if (mode < 0) continue;  // normal env: not boundary evidence
      queues_[static_cast<std::size_t>(mode)].push(o.consecutive_successes);
    }

    std::vector<BoundaryEvent> events;
    for (int n = 0; n < num_dims(); ++n) {
      const auto& dim = config_.dimensions[static_cast<std::size_t>(n)];
      const int i_lo = 2 * n;
      const int i_hi = 2 * n + 1;
      double& lo = bounds_[static_cast<std::size_t>(i_lo)];
      double& hi = bounds_[static_cast<std::size_t>(i_hi)];

      auto& q_lo = queues_[static_cast<std::size_t>(i_lo)];
      if (q_lo.full()) {
        const double mean = q_lo.mean();
        double next = lo;
        if (mean > config_.t_high)
          next = lo - dim.delta;  // widen downward
        else if (mean < config_.t_low)
          next = lo + dim.delta;  // tighten upward
        next = std::clamp(next, dim.min_bound, dim.max_bound);
        next = std::min(next, hi);  // ordering clamp
        if (next != lo) {
          events.push_back({n, i_lo, mean, lo, next});
          lo = next;
          q_lo.clear();
        }
      }

      auto& q_hi = queues_[static_cast<std::size_t>(i_hi)];
      if (q_hi.full()) {
        const double mean = q_hi.mean();
        double next = hi;
        if (mean > config_.t_high)
          next = hi + dim.delta;  // widen upward
        else if (mean < config_.t_low)
          next = hi - dim.delta;  // tighten downward
        next = std::clamp(next, dim.min_bound, dim.max_bound);
        next = std::max(next, lo);  // ordering clamp
        if (next != hi) {
          events.push_back({n, i_hi, mean, hi, next});
          hi = next;
          q_hi.clear();
        }
      }
    }
    return events;
  }

  // Redraws mode and values for every finished environment. A pinned env gets
  // the boundary value bit-exactly on the pinned dimension; everything else
  // is sampled uniformly from the current range.
  void reset_values(const std::vector<std::uint8_t>& done_mask, Rng& rng) {
    if (static_cast<int>(done_mask.size()) != num_envs())
      throw std::invalid_argument("done mask size mismatch");
    const int d = num_dims();
    for (int env = 0; env < num_envs(); ++env) {
      if (!done_mask[static_cast<std::size_t>(env)]) continue;
      int mode = -1;
      if (uniform(rng, 0.0, 1.0) < config_.eval_fraction)
        mode = uniform_int(rng, 0, 2 * d - 1);
      assignment_.modes[static_cast<std::size_t>(env)] = mode;
      for (int n = 0; n < d; ++n) {
        const double lo = bounds_[static_cast<std::size_t>(2 * n)];
        const double hi = bounds_[static_cast<std::size_t>(2 * n + 1)];
        double v;
        if (mode >= 0 && mode / 2 == n)
          v = bounds_[static_cast<std::size_t>(mode)];
        else
          v = (lo == hi) ? lo : uniform(rng, lo, hi);
        assignment_.value(env, n) = v;
      }
    }
  }

 private:
  AdrConfig config_;
  std::vector<double> bounds_;  // [2D]: lower/upper interleaved
  std::vector<BoundaryQueue> queues_;
  AdrEnvAssignment assignment_;
};

}  // namespace vadr::adr
