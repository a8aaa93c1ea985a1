#pragma once

// Scenario definition and the deterministic flight-computer loop.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bfbelp/fusion.hpp"
#include "bfbelp/parallel.hpp"
#include "bfbelp/predictor.hpp"
#include "bfbelp/rng.hpp"
#include "bfbelp/swarm.hpp"
#include "bfbelp/types.hpp"
#include "bfbelp/vehicle.hpp"

namespace bfbelp {

enum class TargetKind { kLinear, kFigure8AsWritten, kLemniscate, kWaypoints };

struct TargetSpec {
  TargetKind kind = TargetKind::kLinear;
  double amplitude = 50.0;
  double period = 200.0;
  double hover_z = 5.0;
  std::vector<Vec3> waypoints;   ///< kWaypoints only; z taken from the waypoint
  double waypoint_speed = 1.0;   ///< m/s along the polyline

  void validate() const;
};

/// Target position at time t (seconds).
Vec3 target_position(const TargetSpec& spec, double t);

enum class TrackMode { kPredicted, kLive };

struct ScenarioConfig {
  std::string name = "linear";
  std::size_t drone_count = 4;
  double duration = 120.0;
  std::uint64_t seed = 1;
  TargetSpec target;
  ObstacleField obstacles;
  FlockingGains flocking;
  CommandLimits command;
  PidGains pid;
  VehicleLimits vehicle;
  PredictorConfig predictor;
  FusionConfig fusion;

  double nominal_dt = 1.0 / 30.0;
  double jitter_frac = 0.05;
  std::size_t prediction_cadence = 10;  ///< ticks between prediction cycles
  double intercept_lead = -1.0;         ///< seconds; negative means horizon * nominal_dt
  TrackMode track_mode = TrackMode::kPredicted;
  double sensor_noise = 0.02;           ///< per-axis std of each agent's target observation, m

  Vec3 start_center{-4.0, -4.0, 5.0};
  double start_spacing = 3.0;

  std::vector<int> disabled_predictors;  ///< agents whose predictor stops...
  double disable_after = 0.0;            ///< ...from this time on

  std::size_t workers = 1;

  void validate() const;
  double lead_seconds() const {
    return intercept_lead >= 0.0 ? intercept_lead : static_cast<double>(predictor.horizon) * nominal_dt;
  }
  std::size_t tick_count() const;
};

/// Linear scenario: target on x = y = t with an obstacle at (30, 30).
ScenarioConfig linear_scenario();
/// Figure-eight scenario: lemniscate target with an obstacle at (10, 10).
ScenarioConfig figure_eight_scenario();

// ---------------------------------------------------------------------------
// Log records

struct DroneRecord {
  int id = 0;
  Vec3 position;
  Vec3 velocity;
  CommandVector command;
  int component = 0;  ///< index into TickRecord::components
};

struct AgentPredictionRecord {
  int agent = 0;
  long origin_tick = 0;
  long lead_tick = 0;  ///< tick forecast by lead_position
  Vec3 lead_position;
  double elapsed = 0.0;  ///< wall seconds; kept out of the deterministic log file
};

struct FusionRecord {
  bool present = false;  ///< a fused value exists
  bool fresh = false;    ///< produced this tick from new arrivals
  long origin_tick = 0;
  long lead_tick = 0;
  Vec3 lead_position;
  Vec3 intercept;  ///< point the swarm steered toward this tick
  std::vector<int> contributors;
  std::vector<int> rejected;
};

struct TickRecord {
  long tick = 0;
  double time = 0.0;
  Vec3 target;
  std::vector<DroneRecord> drones;
  std::vector<AgentPredictionRecord> predictions;
  FusionRecord fusion;
  std::vector<std::vector<int>> components;
};

struct SimLog {
  std::vector<TickRecord> ticks;
  std::vector<Obstacle> obstacles;
  friend bool operator==(const SimLog& a, const SimLog& b);
};

bool operator==(const DroneRecord& a, const DroneRecord& b);
bool operator==(const AgentPredictionRecord& a, const AgentPredictionRecord& b);
bool operator==(const FusionRecord& a, const FusionRecord& b);
bool operator==(const TickRecord& a, const TickRecord& b);

// ---------------------------------------------------------------------------

class Simulator {
 public:
  explicit Simulator(ScenarioConfig cfg);

  bool done() const { return tick_ >= static_cast<long>(total_ticks_); }
  /// Advances one tick and appends its record. Throws SimulationFault on
  /// any non-finite state.
  void step();

  const SimLog& log() const { return log_; }
  SimLog take_log() { return std::move(log_); }
  const std::vector<DroneState>& drones() const { return drones_; }
  const ScenarioConfig& config() const { return cfg_; }
  long tick() const { return tick_; }
  double time() const { return time_; }

 private:
  struct Agent {
    std::deque<TimedPosition> window;
    Rng sensor;
    Rng clock;
  };

  bool predictor_enabled(int agent) const;

  ScenarioConfig cfg_;
  std::size_t total_ticks_ = 0;
  long tick_ = 0;
  double time_ = 0.0;
  Rng fc_clock_;
  std::vector<DroneState> drones_;
  std::vector<Agent> agents_;
  FusionHistory fusion_history_;
  std::optional<FusedPrediction> fused_;
  std::unique_ptr<WorkerPool> pool_;
  SimLog log_;
};

SimLog run(const ScenarioConfig& cfg);

}  // namespace bfbelp
