#pragma once

// Flight-computer aggregation of per-agent predictions.
//
// Each fusion cycle pools whatever predictions arrived, drops agents whose
// forecast sits far from the pool, averages the rest sample by sample, and
// smooths the result with a rolling average over previous cycles. Samples
// are keyed by the tick they forecast, so the rolling average only mixes
// forecasts of the same instant.

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "bfbelp/predictor.hpp"
#include "bfbelp/types.hpp"

namespace bfbelp {

struct FusionConfig {
  std::size_t window_n = 3;  ///< rolling-average depth N
  double outlier_k = 2.0;
  double agreement_eps = 1.0;  ///< meters
  std::size_t agreement_count = 2;

  void validate() const;
};

class PredictionPool {
 public:
  explicit PredictionPool(long cycle_index = 0) : cycle_index_(cycle_index) {}

  /// Throws InputError if the agent already has an entry this cycle.
  void add(Prediction p);

  long cycle_index() const { return cycle_index_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  /// Ascending agent id.
  const std::map<int, Prediction>& entries() const { return entries_; }

 private:
  long cycle_index_;
  std::map<int, Prediction> entries_;
};

struct OutlierSplit {
  std::vector<int> retained;
  std::vector<int> rejected;
};

OutlierSplit filter_outliers(const PredictionPool& pool, const FusionConfig& cfg);

/// Mean of the most recent min(N, size) values.
double rolling_average(std::span<const double> history, std::size_t n);
Vec3 rolling_average(std::span<const Vec3> history, std::size_t n);

struct FusedPrediction {
  long origin_tick = 0;
  std::vector<TimedPosition> future;
  std::vector<int> contributing_agents;
  std::vector<int> rejected_agents;
  bool stale = false;

  /// Forecast position at time t: linear interpolation between samples,
  /// linear continuation of the last segment beyond the horizon.
  Vec3 sample_at(double t) const;
};

/// Per-forecast-tick history of fused values plus the last fused output.
class FusionHistory {
 public:
  /// Appends the fused value for a forecast tick and returns the rolling
  /// average over that tick's history.
  Vec3 push(long forecast_tick, const Vec3& value, std::size_t n);

  /// Drops entries for ticks before `tick`.
  void prune_before(long tick);

  const std::optional<FusedPrediction>& last() const { return last_; }
  void set_last(FusedPrediction f) { last_ = std::move(f); }

 private:
  std::map<long, std::deque<Vec3>> by_tick_;
  std::optional<FusedPrediction> last_;
};

/// Runs one fusion cycle. An empty pool returns the previous fused value
/// flagged stale, or nothing when no cycle has produced one yet.
std::optional<FusedPrediction> fuse_cycle(const PredictionPool& pool, FusionHistory& history,
                                          const FusionConfig& cfg);

}  // namespace bfbelp
