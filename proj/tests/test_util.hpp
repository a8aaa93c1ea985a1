#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bfbelp/predictor.hpp"
#include "bfbelp/scenario.hpp"

namespace testutil {

inline bfbelp::ObservationWindow window_from(const std::vector<bfbelp::Vec3>& pts, double dt = 1.0 / 30.0) {
  std::vector<bfbelp::TimedPosition> s;
  for (std::size_t k = 0; k < pts.size(); ++k) s.push_back({static_cast<double>(k) * dt, pts[k]});
  return bfbelp::ObservationWindow(std::move(s), dt);
}

template <class F>
bfbelp::ObservationWindow window_of(std::size_t m, double dt, F&& pos_at) {
  std::vector<bfbelp::TimedPosition> s;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = static_cast<double>(k) * dt;
    s.push_back({t, pos_at(t)});
  }
  return bfbelp::ObservationWindow(std::move(s), dt);
}

/// Prediction whose every sample sits at `value`, forecasting origin+1..origin+n.
inline bfbelp::Prediction constant_prediction(int agent, double value, std::size_t n = 5, long origin = 0) {
  bfbelp::Prediction p;
  p.agent_id = agent;
  p.origin_tick = origin;
  for (std::size_t k = 0; k < n; ++k) {
    p.future.push_back({static_cast<double>(origin + static_cast<long>(k) + 1), {value, value, value}});
  }
  return p;
}

/// Log with one tick per entry of `frames`; each frame lists drone positions.
inline bfbelp::SimLog log_of(const std::vector<std::vector<bfbelp::Vec3>>& frames, double dt = 0.1) {
  bfbelp::SimLog log;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    bfbelp::TickRecord t;
    t.tick = static_cast<long>(k);
    t.time = static_cast<double>(k) * dt;
    std::vector<int> ids;
    for (std::size_t i = 0; i < frames[k].size(); ++i) {
      bfbelp::DroneRecord d;
      d.id = static_cast<int>(i);
      d.position = frames[k][i];
      t.drones.push_back(d);
      ids.push_back(d.id);
    }
    t.components.push_back(ids);
    log.ticks.push_back(t);
  }
  return log;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("bfbelp_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

/// Short linear scenario for tests that only need a few fusion cycles.
inline bfbelp::ScenarioConfig short_linear(double duration = 20.0) {
  auto cfg = bfbelp::linear_scenario();
  cfg.duration = duration;
  return cfg;
}

}  // namespace testutil
