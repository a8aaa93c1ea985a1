#include "bfbelp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bfbelp {

void TargetSpec::validate() const {
  if (!(period > 0.0)) throw ConfigError("target.period must be > 0");
  if (!(amplitude > 0.0)) throw ConfigError("target.amplitude must be > 0");
  if (kind == TargetKind::kWaypoints) {
    if (waypoints.empty()) throw ConfigError("target.waypoints must list at least one point");
    if (!(waypoint_speed > 0.0)) throw ConfigError("target.waypoint_speed must be > 0");
  }
}

Vec3 target_position(const TargetSpec& spec, double t) {
  const double w = 2.0 * std::numbers::pi / spec.period;
  switch (spec.kind) {
    case TargetKind::kLinear:
      return {t, t, spec.hover_z};
    case TargetKind::kFigure8AsWritten:
      return {spec.amplitude * std::sin(w * t), spec.amplitude * std::sin(w * t), spec.hover_z};
    case TargetKind::kLemniscate:
      return {spec.amplitude * std::sin(w * t), spec.amplitude * std::sin(2.0 * w * t), spec.hover_z};
    case TargetKind::kWaypoints: {
      double remaining = std::max(0.0, t) * spec.waypoint_speed;
      for (std::size_t k = 1; k < spec.waypoints.size(); ++k) {
        const Vec3 a = spec.waypoints[k - 1];
        const Vec3 b = spec.waypoints[k];
        const double len = distance(a, b);
        if (remaining <= len && len > 0.0) return a + (b - a) * (remaining / len);
        remaining -= len;
      }
      return spec.waypoints.back();
    }
  }
  return {};
}

void ScenarioConfig::validate() const {
  if (drone_count < 1) throw ConfigError("sim.drone_count must be >= 1");
  if (!(duration >= 0.0)) throw ConfigError("sim.duration must be >= 0");
  if (!(nominal_dt > 0.0)) throw ConfigError("sim.nominal_dt must be > 0");
  if (!(jitter_frac >= 0.0 && jitter_frac < 1.0)) throw ConfigError("sim.jitter_frac must lie in [0, 1)");
  if (prediction_cadence < 1) throw ConfigError("sim.prediction_cadence must be >= 1");
  if (!(sensor_noise >= 0.0)) throw ConfigError("sensor.noise_std must be >= 0");
  if (!(command.v_max > 0.0)) throw ConfigError("command.v_max must be > 0");
  if (!(vehicle.v_max > 0.0 && vehicle.a_max > 0.0)) throw ConfigError("vehicle limits must be > 0");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  target.validate();
  obstacles.validate();
  flocking.validate();
  pid.validate();
  predictor.validate();
  fusion.validate();
}

std::size_t ScenarioConfig::tick_count() const {
  return static_cast<std::size_t>(std::llround(duration / nominal_dt));
}

ScenarioConfig linear_scenario() {
  ScenarioConfig cfg;
  cfg.name = "linear";
  cfg.duration = 120.0;
  cfg.target.kind = TargetKind::kLinear;
  cfg.obstacles.obstacles.push_back(Obstacle{{30.0, 30.0, 0.0}, 50.0, 8.0, 1.0});
  return cfg;
}

ScenarioConfig figure_eight_scenario() {
  ScenarioConfig cfg;
  cfg.name = "figure8";
  cfg.duration = 200.0;
  cfg.target.kind = TargetKind::kLemniscate;
  cfg.predictor.range_low = -100.0;
  cfg.predictor.range_high = 100.0;
  cfg.obstacles.obstacles.push_back(Obstacle{{10.0, 10.0, 0.0}, 50.0, 8.0, 1.0});
  return cfg;
}

// ---------------------------------------------------------------------------

bool operator==(const DroneRecord& a, const DroneRecord& b) {
  return a.id == b.id && a.position == b.position && a.velocity == b.velocity && a.command == b.command &&
         a.component == b.component;
}

bool operator==(const AgentPredictionRecord& a, const AgentPredictionRecord& b) {
  return a.agent == b.agent && a.origin_tick == b.origin_tick && a.lead_tick == b.lead_tick &&
         a.lead_position == b.lead_position;
}

bool operator==(const FusionRecord& a, const FusionRecord& b) {
  return a.present == b.present && a.fresh == b.fresh && a.origin_tick == b.origin_tick &&
         a.lead_tick == b.lead_tick && a.lead_position == b.lead_position && a.intercept == b.intercept &&
         a.contributors == b.contributors && a.rejected == b.rejected;
}

bool operator==(const TickRecord& a, const TickRecord& b) {
  return a.tick == b.tick && a.time == b.time && a.target == b.target && a.drones == b.drones &&
         a.predictions == b.predictions && a.fusion == b.fusion && a.components == b.components;
}

bool operator==(const SimLog& a, const SimLog& b) { return a.ticks == b.ticks; }

// ---------------------------------------------------------------------------

namespace {

// Stream ids for derive_seed.
constexpr std::uint64_t kStreamClock = 1;
constexpr std::uint64_t kStreamSensor = 2;
constexpr std::uint64_t kStreamDroneClock = 3;
constexpr std::uint64_t kStreamPredict = 4;

std::vector<DroneState> initial_drones(const ScenarioConfig& cfg) {
  const auto n = cfg.drone_count;
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const auto rows = (n + cols - 1) / cols;
  std::vector<DroneState> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double cx = (static_cast<double>(i % cols) - 0.5 * static_cast<double>(cols - 1)) * cfg.start_spacing;
    const double cy = (static_cast<double>(i / cols) - 0.5 * static_cast<double>(rows - 1)) * cfg.start_spacing;
    DroneState d;
    d.id = static_cast<int>(i);
    d.position = cfg.start_center + Vec3{cx, cy, 0.0};
    out.push_back(d);
  }
  return out;
}

void check_finite(long tick, const Vec3& v, const char* what) {
  if (!is_finite(v)) throw SimulationFault(tick, std::string("non-finite ") + what);
}

}  // namespace

Simulator::Simulator(ScenarioConfig cfg)
    : cfg_(std::move(cfg)), fc_clock_(derive_seed(cfg_.seed, {kStreamClock})) {
  cfg_.validate();
  total_ticks_ = cfg_.tick_count();
  drones_ = initial_drones(cfg_);
  for (std::size_t i = 0; i < cfg_.drone_count; ++i) {
    agents_.push_back(Agent{{},
                            Rng(derive_seed(cfg_.seed, {kStreamSensor, i})),
                            Rng(derive_seed(cfg_.seed, {kStreamDroneClock, i}))});
  }
  pool_ = std::make_unique<WorkerPool>(cfg_.workers);
  log_.obstacles = cfg_.obstacles.obstacles;
}

bool Simulator::predictor_enabled(int agent) const {
  if (time_ < cfg_.disable_after) return true;
  return std::find(cfg_.disabled_predictors.begin(), cfg_.disabled_predictors.end(), agent) ==
         cfg_.disabled_predictors.end();
}

void Simulator::step() {
  if (done()) return;
  const std::size_t n = drones_.size();
  TickRecord rec;
  rec.tick = tick_;
  rec.time = time_;

  // (1)-(2) sample the target and let every agent observe it.
  rec.target = target_position(cfg_.target, time_);
  check_finite(tick_, rec.target, "target position");
  for (auto& agent : agents_) {
    Vec3 seen = rec.target;
    if (cfg_.sensor_noise > 0.0) {
      for (std::size_t a = 0; a < kAxes; ++a) seen[a] += agent.sensor.normal(0.0, cfg_.sensor_noise);
    }
    agent.window.push_back({time_, seen});
    while (agent.window.size() > cfg_.predictor.window_len) agent.window.pop_front();
  }

  // (3) prediction cycle.
  const bool cycle_tick = tick_ % static_cast<long>(cfg_.prediction_cadence) == 0;
  PredictionPool pool(tick_ / static_cast<long>(cfg_.prediction_cadence));
  if (cycle_tick) {
    std::vector<int> firing;
    for (std::size_t i = 0; i < n; ++i) {
      if (agents_[i].window.size() >= cfg_.predictor.window_len && predictor_enabled(static_cast<int>(i))) {
        firing.push_back(static_cast<int>(i));
      }
    }
    std::vector<Prediction> results(firing.size());
    pool_->run(firing.size(), [&](std::size_t k) {
      const int id = firing[k];
      const auto& win = agents_[static_cast<std::size_t>(id)].window;
      ObservationWindow window(std::vector<TimedPosition>(win.begin(), win.end()), cfg_.nominal_dt);
      const std::uint64_t seed = derive_seed(cfg_.seed, {kStreamPredict, static_cast<std::uint64_t>(id),
                                                         static_cast<std::uint64_t>(pool.cycle_index())});
      Prediction p = predict(window, cfg_.predictor, seed);
      p.agent_id = id;
      p.cycle_index = pool.cycle_index();
      p.origin_tick = tick_;
      results[k] = std::move(p);
    });
    for (auto& p : results) {
      for (const auto& s : p.future) check_finite(tick_, s.position, "predicted position");
      AgentPredictionRecord pr;
      pr.agent = p.agent_id;
      pr.origin_tick = p.origin_tick;
      pr.lead_tick = p.origin_tick + static_cast<long>(p.future.size());
      pr.lead_position = p.future.back().position;
      pr.elapsed = p.elapsed;
      rec.predictions.push_back(pr);
      pool.add(std::move(p));
    }
  }

  // (4) fusion over whatever arrived.
  if (!pool.empty()) {
    fused_ = fuse_cycle(pool, fusion_history_, cfg_.fusion);
    rec.fusion.fresh = true;
  } else if (fused_) {
    fused_->stale = true;
  }

  // Steering point.
  Vec3 intercept = rec.target;
  if (cfg_.track_mode == TrackMode::kPredicted && fused_) intercept = fused_->sample_at(time_ + cfg_.lead_seconds());
  check_finite(tick_, intercept, "intercept point");
  if (fused_) {
    rec.fusion.present = true;
    rec.fusion.origin_tick = fused_->origin_tick;
    rec.fusion.lead_tick = fused_->origin_tick + static_cast<long>(fused_->future.size());
    rec.fusion.lead_position = fused_->future.back().position;
    rec.fusion.contributors = fused_->contributing_agents;
    rec.fusion.rejected = fused_->rejected_agents;
  }
  rec.fusion.intercept = intercept;

  // (5) sub-swarms on a frozen snapshot.
  std::vector<AgentKinematics> snapshot;
  snapshot.reserve(n);
  for (const auto& d : drones_) snapshot.push_back({d.id, d.position, d.velocity});
  rec.components = detect_subswarms(snapshot, cfg_.flocking.visual_range);
  std::vector<int> component_of(n, 0);
  for (std::size_t c = 0; c < rec.components.size(); ++c) {
    for (int id : rec.components[c]) component_of[static_cast<std::size_t>(id)] = static_cast<int>(c);
  }

  // (6)-(7) per-drone commands and integration; reads only the snapshot.
  std::vector<CommandVector> commands(n);
  std::vector<DroneState> next(n);
  std::vector<double> dts(n);
  for (std::size_t i = 0; i < n; ++i) dts[i] = jittered_dt(agents_[i].clock, cfg_.nominal_dt, cfg_.jitter_frac);
  pool_->run(n, [&](std::size_t i) {
    const auto& members = rec.components[static_cast<std::size_t>(component_of[i])];
    std::vector<AgentKinematics> neighbors;
    for (int id : members) {
      if (id != static_cast<int>(i)) neighbors.push_back(snapshot[static_cast<std::size_t>(id)]);
    }
    const Vec3 body = swarm_body(snapshot[i], neighbors, cfg_.flocking.visual_range);
    const CommandVector flock = flocking_delta(snapshot[i], neighbors, body, intercept, cfg_.flocking);
    const CommandVector repulse = repulsive_velocity(snapshot[i].position, cfg_.obstacles);
    commands[i] = compose_command(flock, repulse, cfg_.command);
    next[i] = integrate_drone(drones_[i], commands[i], dts[i], cfg_.pid, cfg_.vehicle);
  });

  for (std::size_t i = 0; i < n; ++i) {
    check_finite(tick_, next[i].position, "drone position");
    check_finite(tick_, next[i].velocity, "drone velocity");
    rec.drones.push_back({drones_[i].id, drones_[i].position, drones_[i].velocity, commands[i], component_of[i]});
  }
  drones_ = std::move(next);

  // (8) log and advance the flight-computer clock.
  log_.ticks.push_back(std::move(rec));
  time_ += jittered_dt(fc_clock_, cfg_.nominal_dt, cfg_.jitter_frac);
  ++tick_;
}

SimLog run(const ScenarioConfig& cfg) {
  Simulator sim(cfg);
  while (!sim.done()) sim.step();
  return sim.take_log();
}

}  // namespace bfbelp
