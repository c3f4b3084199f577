#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vadr::adr {

// How a sampled randomisation value is applied to the nominal parameter.
enum class DimensionKind { Scaling, Additive, SetValue };

inline const char* to_string(DimensionKind k) {
  switch (k) {
    case DimensionKind::Scaling: return "scaling";
    case DimensionKind::Additive: return "additive";
    case DimensionKind::SetValue: return "set_value";
  }
  return "?";
}

inline DimensionKind dimension_kind_from_string(const std::string& s) {
  if (s == "scaling") return DimensionKind::Scaling;
  if (s == "additive") return DimensionKind::Additive;
  if (s == "set_value") return DimensionKind::SetValue;
  throw std::invalid_argument("unknown dimension kind: " + s);
}

struct DimensionSpec {
  std::string name;
  DimensionKind kind = DimensionKind::Scaling;
  double init_lo = 0.0;
  double init_hi = 0.0;
  double min_bound = 0.0;  // hard clamp on the lower boundary
  double max_bound = 0.0;  // hard clamp on the upper boundary
  double delta = 0.0;      // per-dimension adjustment step

  void validate() const {
    if (name.empty()) throw std::invalid_argument("dimension name empty");
    if (!(init_lo <= init_hi))
      throw std::invalid_argument(name + ": init_lo > init_hi");
    if (!(min_bound <= init_lo))
      throw std::invalid_argument(name + ": min_bound > init_lo");
    if (!(init_hi <= max_bound))
      throw std::invalid_argument(name + ": init_hi > max_bound");
    if (!(delta > 0.0)) throw std::invalid_argument(name + ": delta must be > 0");
  }

  // Reference value used for severity normalisation by the synthetic policy.
  double nominal() const { return 0.5 * (init_lo + init_hi); }
};

struct AdrConfig {
  double t_high = 20.0;        // widen when mean boundary successes exceed this
  double t_low = 5.0;          // tighten when below this
  double eval_fraction = 0.4;  // probability an env is pinned to a boundary at reset
  int queue_capacity = 256;
  std::vector<DimensionSpec> dimensions;

  void validate() const {
    if (!(t_low > 0.0 && t_low < t_high))
      throw std::invalid_argument("require 0 < t_low < t_high");
    if (!(eval_fraction > 0.0 && eval_fraction < 1.0))
      throw std::invalid_argument("eval_fraction must be in (0, 1)");
    if (queue_capacity < 1) throw std::invalid_argument("queue_capacity < 1");
    if (dimensions.empty()) throw std::invalid_argument("no dimensions configured");
    for (const auto& d : dimensions) d.validate();
  }

  int num_dims() const { return static_cast<int>(dimensions.size()); }

  int find_dimension(const std::string& name) const {
    for (int i = 0; i < num_dims(); ++i)
      if (dimensions[static_cast<std::size_t>(i)].name == name) return i;
    return -1;
  }
};

// Fixed-capacity ring of episode-final consecutive-success counts. When full
// and untouched by a threshold, the oldest entry is evicted on append.
class BoundaryQueue {
 public:
  explicit BoundaryQueue(int capacity = 256)
      : capacity_(capacity), entries_(static_cast<std::size_t>(capacity), 0) {
    if (capacity < 1) throw std::invalid_argument("queue capacity < 1");
  }

  void push(int consecutive_successes) {
    if (consecutive_successes < 0)
      throw std::invalid_argument("negative success count");
    if (size_ < capacity_) {
      entries_[static_cast<std::size_t>((head_ + size_) % capacity_)] =
          consecutive_successes;
      sum_ += consecutive_successes;
      ++size_;
    } else {
      auto& slot = entries_[static_cast<std::size_t>(head_)];
      sum_ += consecutive_successes - slot;
      slot = consecutive_successes;
      head_ = (head_ + 1) % capacity_;
    }
  }

  void clear() {
    head_ = 0;
    size_ = 0;
    sum_ = 0;
  }

  int size() const { return size_; }
  int capacity() const { return capacity_; }
  bool full() const { return size_ == capacity_; }
  double mean() const {
    return size_ == 0 ? 0.0 : static_cast<double>(sum_) / size_;
  }

 private:
  int capacity_;
  int head_ = 0;
  int size_ = 0;
  std::int64_t sum_ = 0;
  std::vector<int> entries_;
};

// mode -1: normal env (all dims sampled from the current ranges).
// mode b in [0, 2D): pinned to boundary b of dimension b/2.
struct AdrEnvAssignment {
  std::vector<int> modes;
  std::vector<double> values;  // row-major [num_envs x D]
  int num_dims = 0;

  double value(int env, int dim) const {
    return values[static_cast<std::size_t>(env) * num_dims + dim];
  }
  double& value(int env, int dim) {
    return values[static_cast<std::size_t>(env) * num_dims + dim];
  }
  int num_envs() const { return static_cast<int>(modes.size()); }
};

struct EpisodeOutcome {
  int env_index = -1;
  int consecutive_successes = 0;
  bool done = false;
};

}  // namespace vadr::adr
