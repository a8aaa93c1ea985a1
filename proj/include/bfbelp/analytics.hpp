#pragma once

// Post-run metrics over a SimLog.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "bfbelp/scenario.hpp"
#include "bfbelp/stats.hpp"
#include "bfbelp/types.hpp"

namespace bfbelp {

struct MetricSeries {
  std::vector<double> time;
  std::vector<double> value;

  std::size_t size() const { return value.size(); }
  double mean() const;
  double max() const;
  /// Mean over samples with time < t_end.
  double mean_before(double t_end) const;
  /// Longest contiguous stretch (seconds) with value < threshold.
  double longest_run_below(double threshold) const;
};

/// Mean pairwise distance per tick. Throws InputError for fewer than two drones.
MetricSeries group_metric(const SimLog& log);

constexpr double kHeadingSpeedFloor = 0.05;  // m/s

/// Mean pairwise |omega_i - omega_j| of horizontal heading rates per tick.
/// Tick 0 carries 0 so the series stays aligned with the log.
MetricSeries order_metric(const SimLog& log, double speed_floor = kHeadingSpeedFloor);

/// Per-axis mean |drone - target| over every tick and drone.
Vec3 tracking_error(const SimLog& log);

/// Fused forecast minus realized target, one entry per fresh fusion cycle
/// whose forecast tick falls inside the log.
struct ResidualSeries {
  std::vector<long> forecast_tick;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  std::size_t size() const { return x.size(); }
  void append(const ResidualSeries& other);
};

ResidualSeries fused_residuals(const SimLog& log);

constexpr double kCollisionDistance = 0.5;  // m

struct SeparationScan {
  std::size_t collisions = 0;  ///< (tick, pair) events below the threshold
  double min_separation = 0.0;
};

SeparationScan separation_scan(const SimLog& log, double threshold = kCollisionDistance);

/// Count of (tick, drone) entries inside an obstacle's hard radius (horizontal).
std::size_t hard_radius_violations(const SimLog& log);

struct TrialStats {
  std::uint64_t seed = 0;
  std::size_t residual_count = 0;
  Interval ci_x;
  Interval ci_y;
  double p_x = 1.0;
  double p_y = 1.0;
  Vec3 tracking;
  double motion_sd = 0.0;   ///< mean over axes of the sd of drone - target
  double motion_var = 0.0;  ///< mean over axes of the variance of drone - target
  std::size_t collisions = 0;
  double min_separation = 0.0;

  friend bool operator==(const TrialStats&, const TrialStats&) = default;
};

TrialStats summarize_trial(const SimLog& log, std::uint64_t seed = 0);
/// Same, from an already extracted residual series.
TrialStats summarize_trial(const SimLog& log, const ResidualSeries& residuals, std::uint64_t seed = 0);

/// Pooled cross-trial summary: intervals and tests over the concatenated
/// residual series; the remaining fields are means over trials except
/// collisions (summed) and min_separation (minimum).
TrialStats pool_trials(const std::vector<TrialStats>& trials, const std::vector<ResidualSeries>& residuals);

void write_trial_stats_csv(std::ostream& os, const std::vector<TrialStats>& rows);
/// Throws InputError naming the line on malformed input.
std::vector<TrialStats> read_trial_stats_csv(std::istream& is);

/// Four-decimal human-readable table.
std::string format_trial_table(const TrialStats& s, const std::string& title);

}  // namespace bfbelp
