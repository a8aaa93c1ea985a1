#pragma once

// Online trajectory prediction from a window of target observations.
//
// Per axis a BFBEL network is trained on the window so that its output
// tracks the one-step increment. The output history is smoothed by a cubic,
// extrapolated, and integrated forward from an anchor that sits just before
// the final `overlap_len` observations. Several perturbed candidates are
// produced; the one whose overlapping segment best matches the held-back
// observations is kept and its overlap stripped.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bfbelp/bfbel.hpp"
#include "bfbelp/polyfit.hpp"
#include "bfbelp/types.hpp"

namespace bfbelp {

struct TimedPosition {
  double t = 0.0;
  Vec3 position;
  friend bool operator==(const TimedPosition&, const TimedPosition&) = default;
};

struct PredictorConfig {
  std::size_t window_len = 30;  ///< m
  std::size_t overlap_len = 5;  ///< length of the held-back comparison segment
  std::size_t horizon = 15;     ///< L future samples
  std::size_t candidates = 5;   ///< K
  double perturbation_scale = 0.01;
  std::size_t training_passes = 4;
  std::size_t readapt_passes = 4;  ///< passes over the window after each perturbation
  double range_low = -100.0;
  double range_high = 200.0;
  std::size_t layers = 5;
  BfbelGains gains;

  void validate() const;
};

class ObservationWindow {
 public:
  ObservationWindow() = default;
  ObservationWindow(std::vector<TimedPosition> samples, double nominal_dt);

  /// Throws InputError unless m >= overlap_len + 5 and timestamps increase.
  void validate(std::size_t overlap_len) const;

  std::size_t size() const { return samples_.size(); }
  double nominal_dt() const { return nominal_dt_; }
  const std::vector<TimedPosition>& samples() const { return samples_; }
  std::vector<double> axis(std::size_t a) const;

 private:
  std::vector<TimedPosition> samples_;
  double nominal_dt_ = 1.0 / 30.0;
};

struct ComparisonError {
  double e1 = 0.0;  ///< sum of squared position differences
  double e2 = 0.0;  ///< signed sum of first-difference differences
  double e3 = 0.0;  ///< summed curvature of f minus summed curvature of c
  double total = 0.0;
};

struct PredictionCandidate {
  std::vector<Vec3> f_series;  ///< overlap_len + L positions
  ComparisonError error;
  std::size_t seed_id = 0;
  double total_error() const { return error.total; }
};

struct Prediction {
  std::vector<TimedPosition> future;
  int agent_id = 0;
  long cycle_index = 0;
  long origin_tick = 0;  ///< tick of the last observation; future[k] forecasts origin_tick + k + 1
  double elapsed = 0.0;  ///< wall seconds spent in predict
};

/// Running sum from the anchor: f_0 = anchor + d_0, f_k = f_{k-1} + d_k.
std::vector<double> roll_forward(double anchor, std::span<const double> deltas);

/// Discrete parametric curvature at interior sample k of an (x, y) path,
/// central differences; 0 where the speed term falls below 1e-9.
double discrete_curvature(std::span<const Vec3> path, std::size_t k);

/// Scores candidate overlap `f` against the held-back observations `c` on
/// the horizontal pair.
ComparisonError comparison_error(std::span<const Vec3> f_overlap, std::span<const Vec3> c_series);

/// Trained per-axis networks (x, y, z).
struct AxisNetworks {
  BfbelNetwork axis[kAxes];
};

AxisNetworks train_axes(const ObservationWindow& window, const PredictorConfig& cfg);

std::vector<PredictionCandidate> generate_candidates(const AxisNetworks& nets, const ObservationWindow& window,
                                                     std::size_t count, std::size_t horizon, std::uint64_t seed,
                                                     const PredictorConfig& cfg);

/// Minimal total error; ties go to the lowest seed_id.
const PredictionCandidate& select_best(std::span<const PredictionCandidate> candidates);

Prediction predict(const ObservationWindow& window, const PredictorConfig& cfg, std::uint64_t seed);

/// Direct cubic fit of positions per axis, extrapolated `horizon` steps.
Prediction baseline_curvefit_predict(const ObservationWindow& window, std::size_t horizon);

}  // namespace bfbelp
