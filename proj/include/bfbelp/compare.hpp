#pragma once

// Predictor comparison over a shared target stream: BFBEL-P with one agent,
// BFBEL-P with several agents plus fusion, and the cubic curve-fit baseline.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "bfbelp/analytics.hpp"
#include "bfbelp/scenario.hpp"

namespace bfbelp {

enum class CompareMode { kShort, kLong };

constexpr std::size_t kShortCycles = 90;
constexpr std::size_t kLongCycles = 840;

std::size_t compare_cycles(CompareMode mode);

struct MethodResult {
  std::string method;
  std::size_t predictions = 0;  ///< individual predict calls
  std::size_t cycles = 0;       ///< prediction cycles (one forecast each)
  double mean_predict_s = 0.0;  ///< mean wall time of a single predict call
  double batch_wall_s = 0.0;    ///< total wall time spent in prediction batches
  double effective_parallelism = 1.0;
  double per_prediction_s = 0.0;  ///< reported time per forecast
  ResidualSeries residuals;
};

struct CompareResult {
  CompareMode mode = CompareMode::kShort;
  std::vector<MethodResult> methods;  ///< bfbel_single, bfbel_multi, cubic_fit
};

/// agents = size of the multi-agent group; workers = threads used for it.
CompareResult run_compare(const ScenarioConfig& cfg, CompareMode mode, std::size_t agents = 4,
                          std::size_t workers = 4);

void write_timing_table(std::ostream& os, const CompareResult& r);
void write_interval_table(std::ostream& os, const CompareResult& r);

struct TimingRow {
  std::string method;
  std::size_t predictions = 0;
  std::size_t cycles = 0;
  double mean_predict_s = 0.0;
  double effective_parallelism = 0.0;
  double per_prediction_s = 0.0;
};
struct IntervalRow {
  std::string method;
  std::string axis;
  std::size_t n = 0;
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double half_width = 0.0;
  double p = 0.0;
};
std::vector<TimingRow> read_timing_table(std::istream& is);
std::vector<IntervalRow> read_interval_table(std::istream& is);

struct ScalingResult {
  std::size_t tasks = 0;
  std::size_t workers = 0;
  double serial_s = 0.0;
  double parallel_s = 0.0;
  double speedup() const { return parallel_s > 0.0 ? serial_s / parallel_s : 0.0; }
};

/// Times the same batch of independent predictions with one worker and with
/// `workers` workers. Results are checked for equality between the two runs.
ScalingResult measure_scaling(const ScenarioConfig& cfg, std::size_t tasks, std::size_t workers);

}  // namespace bfbelp
