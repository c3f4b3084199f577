#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vadr/geom/camera.hpp"
#include "vadr/geom/pnp.hpp"
#include "vadr/geom/procrustes.hpp"
#include "vadr/geom/triangulate.hpp"

namespace vadr::geom {

struct CameraDiagnostics {
  bool solved = false;
  bool kept = false;
  double reprojection_rms = std::numeric_limits<double>::infinity();
  Pose pnp_pose;
};

struct EstimateDiagnostics {
  std::vector<CameraDiagnostics> cameras;
  int corners_triangulated = 0;
  bool registered = false;
};

// Keeps the cameras whose solved pose reprojects onto the detections within
// threshold_px RMS.
inline std::vector<std::uint8_t> filter_cameras(
    const CameraRig& rig, const std::vector<KeypointObservation>& observations,
    const std::vector<PnpResult>& solutions,
    const std::vector<std::uint8_t>& solved, const CubeModel& model,
    double threshold_px) {
  std::vector<std::uint8_t> kept(rig.size(), 0);
  for (std::size_t c = 0; c < rig.size(); ++c) {
    if (!solved[c]) continue;
    const double rms = reprojection_rms(rig[c], observations[c], model,
                                        solutions[c].cube_to_palm);
    kept[c] = rms <= threshold_px ? 1 : 0;
  }
  return kept;
}

struct PoseEstimatorConfig {
  double filter_threshold_px = 5.0;
  CubeModel model;
};

// Per-camera PnP -> reprojection filter -> multi-view triangulation ->
// rigid registration against the cube model.
inline std::optional<Pose> estimate_pose(
    const CameraRig& rig, const std::vector<KeypointObservation>& observations,
    const PoseEstimatorConfig& config, EstimateDiagnostics* diagnostics = nullptr) {
  if (observations.size() != rig.size())
    throw std::invalid_argument("rig/observation size mismatch");
  const std::size_t m = rig.size();

  std::vector<PnpResult> solutions(m);
  std::vector<std::uint8_t> solved(m, 0);
  for (std::size_t c = 0; c < m; ++c) {
    if (observations[c].valid_count() < 4) continue;
    try {
      solutions[c] = pnp_solve(rig[c], observations[c], config.model);
      solved[c] = solutions[c].converged ? 1 : 0;
    } catch (const std::exception&) {
      solved[c] = 0;
    }
  }

  const std::vector<std::uint8_t> kept = filter_cameras(
      rig, observations, solutions, solved, config.model,
      config.filter_threshold_px);

  if (diagnostics) {
    diagnostics->cameras.assign(m, {});
    for (std::size_t c = 0; c < m; ++c) {
      auto& d = diagnostics->cameras[c];
      d.solved = solved[c] != 0;
      d.kept = kept[c] != 0;
      if (d.solved) {
        d.reprojection_rms = reprojection_rms(rig[c], observations[c],
                                              config.model,
                                              solutions[c].cube_to_palm);
        d.pnp_pose = solutions[c].cube_to_palm;
      }
    }
    diagnostics->corners_triangulated = 0;
    diagnostics->registered = false;
  }

  const int kept_count = std::accumulate(kept.begin(), kept.end(), 0);
  if (kept_count == 0) return std::nullopt;

  // One surviving camera cannot triangulate; fall back to its PnP pose.
  if (kept_count == 1) {
    for (std::size_t c = 0; c < m; ++c)
      if (kept[c]) {
        if (diagnostics) diagnostics->registered = true;
        return solutions[c].cube_to_palm;
      }
  }

  const auto corners = triangulate_corners(rig, observations, kept);
  std::vector<Vec3> model_pts;
  std::vector<Vec3> observed_pts;
  for (int i = 0; i < 8; ++i) {
    const auto& t = corners[static_cast<std::size_t>(i)];
    if (!t.valid) continue;
    model_pts.push_back(config.model.corner(i));
    observed_pts.push_back(t.point);
  }
  if (diagnostics)
    diagnostics->corners_triangulated = static_cast<int>(model_pts.size());
  if (model_pts.size() < 3) return std::nullopt;

  try {
    const Pose pose = register_points(model_pts, observed_pts);
    if (diagnostics) diagnostics->registered = true;
    return pose;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// Stateful wrapper that holds the last good pose through total failures and
// raises a staleness flag, so downstream consumers keep a usable estimate.
class PoseEstimator {
 public:
  explicit PoseEstimator(PoseEstimatorConfig config) : config_(config) {}

  struct Output {
    Pose pose;
    bool stale = false;  // no fresh estimate this frame
    bool ever_valid = false;
  };

  Output process(const CameraRig& rig,
                 const std::vector<KeypointObservation>& observations,
                 EstimateDiagnostics* diagnostics = nullptr) {
    const auto estimate = estimate_pose(rig, observations, config_, diagnostics);
    if (estimate) {
      last_pose_ = *estimate;
      ever_valid_ = true;
      return {*estimate, false, true};
    }
    return {last_pose_, true, ever_valid_};
  }

  const PoseEstimatorConfig& config() const { return config_; }

 private:
  PoseEstimatorConfig config_;
  Pose last_pose_;
  bool ever_valid_ = false;
};

struct PoseError {
  double rotation_deg = 0.0;
  Vec3 translation_mm = Vec3::Zero();
};

inline PoseError pose_errors(const Pose& estimate, const Pose& truth) {
  PoseError e;
  e.rotation_deg =
      rotation_distance(estimate.orientation, truth.orientation) * 180.0 / M_PI;
  e.translation_mm = (estimate.position - truth.position).cwiseAbs() * 1000.0;
  return e;
}

// Batch statistics in the reporting layout used for pose benchmarks:
// mean with a 90% confidence interval, rotation in degrees and per-axis
// translation in millimetres.
struct PoseErrorReport {
  int count = 0;
  double rotation_deg_mean = 0.0;
  double rotation_deg_ci90 = 0.0;
  Vec3 translation_mm_mean = Vec3::Zero();
  Vec3 translation_mm_ci90 = Vec3::Zero();
};

inline PoseErrorReport summarize_errors(const std::vector<PoseError>& errors) {
  PoseErrorReport r;
  r.count = static_cast<int>(errors.size());
  if (errors.empty()) return r;
  const double n = static_cast<double>(errors.size());
  for (const auto& e : errors) {
    r.rotation_deg_mean += e.rotation_deg;
    r.translation_mm_mean += e.translation_mm;
  }
  r.rotation_deg_mean /= n;
  r.translation_mm_mean /= n;
  double rot_var = 0.0;
  Vec3 trans_var = Vec3::Zero();
  for (const auto& e : errors) {
    rot_var += std::pow(e.rotation_deg - r.rotation_deg_mean, 2);
    trans_var += (e.translation_mm - r.translation_mm_mean)
                     .cwiseAbs2()
                     .eval();
  }
  if (errors.size() > 1) {
    rot_var /= (n - 1.0);
    trans_var /= (n - 1.0);
  }
  constexpr double z90 = 1.6448536269514722;  // two-sided 90% normal quantile
  r.rotation_deg_ci90 = z90 * std::sqrt(rot_var / n);
  r.translation_mm_ci90 = z90 * (trans_var / n).cwiseSqrt();
  return r;
}

}  // namespace vadr::geom
