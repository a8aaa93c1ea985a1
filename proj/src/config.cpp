#include "bfbelp/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "bfbelp/csv.hpp"

namespace bfbelp {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what + " (got '" + value + "')");
}

double as_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(key, v, "expected a number");
  return out;
}

std::size_t as_size(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    bad(key, v, "expected a non-negative integer");
  }
  return out;
}

std::uint64_t as_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    bad(key, v, "expected a non-negative integer");
  }
  return out;
}

std::vector<int> as_ids(const std::string& key, const std::string& v) {
  std::vector<int> out;
  if (trim(v).empty()) return out;
  for (auto part : csv::split(v, ',')) {
    const std::string p = trim(part);
    out.push_back(static_cast<int>(as_size(key, p)));
  }
  return out;
}

std::vector<Vec3> as_points(const std::string& key, const std::string& v) {
  std::vector<Vec3> out;
  if (trim(v).empty()) return out;
  for (auto part : csv::split(v, ';')) {
    std::istringstream is{std::string(part)};
    std::string a, b, c, extra;
    if (!(is >> a >> b >> c) || (is >> extra)) bad(key, v, "expected 'x y z; x y z; ...'");
    out.push_back({as_double(key, a), as_double(key, b), as_double(key, c)});
  }
  return out;
}

std::string ids_text(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + std::to_string(ids[i]);
  return out;
}

std::string points_text(const std::vector<Vec3>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += "; ";
    out += csv::fmt(pts[i].x) + " " + csv::fmt(pts[i].y) + " " + csv::fmt(pts[i].z);
  }
  return out;
}

const char* target_kind_name(TargetKind k) {
  switch (k) {
    case TargetKind::kLinear: return "linear";
    case TargetKind::kFigure8AsWritten: return "figure8_as_written";
    case TargetKind::kLemniscate: return "lemniscate";
    case TargetKind::kWaypoints: return "waypoints";
  }
  return "linear";
}

struct Field {
  std::string key;
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define BFBELP_NUM(KEY, MEMBER)                                                                         \
  Field{KEY, [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.MEMBER = as_double(k, v); }, \
        [](const ScenarioConfig& c) { return csv::fmt(static_cast<double>(c.MEMBER)); }}
#define BFBELP_SIZE(KEY, MEMBER)                                                                      \
  Field{KEY, [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.MEMBER = as_size(k, v); }, \
        [](const ScenarioConfig& c) { return std::to_string(c.MEMBER); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"sim.name", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.name = v; },
            [](const ScenarioConfig& c) { return c.name; }},
      BFBELP_SIZE("sim.drone_count", drone_count),
      BFBELP_NUM("sim.duration", duration),
      Field{"sim.seed", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.seed = as_u64(k, v); },
            [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
      BFBELP_NUM("sim.nominal_dt", nominal_dt),
      BFBELP_NUM("sim.jitter_frac", jitter_frac),
      BFBELP_SIZE("sim.prediction_cadence", prediction_cadence),
      BFBELP_NUM("sim.intercept_lead", intercept_lead),
      Field{"sim.track_mode",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              if (v == "predicted") c.track_mode = TrackMode::kPredicted;
              else if (v == "live") c.track_mode = TrackMode::kLive;
              else bad(k, v, "expected predicted | live");
            },
            [](const ScenarioConfig& c) { return std::string(c.track_mode == TrackMode::kLive ? "live" : "predicted"); }},
      BFBELP_SIZE("sim.workers", workers),
      BFBELP_NUM("sim.start_x", start_center.x),
      BFBELP_NUM("sim.start_y", start_center.y),
      BFBELP_NUM("sim.start_z", start_center.z),
      BFBELP_NUM("sim.start_spacing", start_spacing),
      Field{"sim.disabled_predictors",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.disabled_predictors = as_ids(k, v); },
            [](const ScenarioConfig& c) { return ids_text(c.disabled_predictors); }},
      BFBELP_NUM("sim.disable_after", disable_after),
      BFBELP_NUM("sensor.noise_std", sensor_noise),

      Field{"target.kind",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              if (v == "linear") c.target.kind = TargetKind::kLinear;
              else if (v == "figure8_as_written") c.target.kind = TargetKind::kFigure8AsWritten;
              else if (v == "lemniscate") c.target.kind = TargetKind::kLemniscate;
              else if (v == "waypoints") c.target.kind = TargetKind::kWaypoints;
              else bad(k, v, "expected linear | figure8_as_written | lemniscate | waypoints");
            },
            [](const ScenarioConfig& c) { return std::string(target_kind_name(c.target.kind)); }},
      BFBELP_NUM("target.amplitude", target.amplitude),
      BFBELP_NUM("target.period", target.period),
      BFBELP_NUM("target.hover_z", target.hover_z),
      BFBELP_NUM("target.waypoint_speed", target.waypoint_speed),
      Field{"target.waypoints",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.target.waypoints = as_points(k, v); },
            [](const ScenarioConfig& c) { return points_text(c.target.waypoints); }},

      BFBELP_NUM("flocking.r_c", flocking.r_c),
      BFBELP_NUM("flocking.r_s", flocking.r_s),
      BFBELP_NUM("flocking.r_a", flocking.r_a),
      BFBELP_NUM("flocking.visual_range", flocking.visual_range),
      BFBELP_NUM("flocking.separation_radius", flocking.separation_radius),
      BFBELP_NUM("flocking.min_separation", flocking.min_separation),
      Field{"flocking.alignment_mode",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              if (v == "target_drive") c.flocking.alignment = AlignmentMode::kTargetDrive;
              else if (v == "velocity_match") c.flocking.alignment = AlignmentMode::kVelocityMatch;
              else bad(k, v, "expected target_drive | velocity_match");
            },
            [](const ScenarioConfig& c) {
              return std::string(c.flocking.alignment == AlignmentMode::kTargetDrive ? "target_drive"
                                                                                     : "velocity_match");
            }},

      BFBELP_NUM("command.v_max", command.v_max),
      BFBELP_NUM("pid.kp", pid.kp),
      BFBELP_NUM("pid.ki", pid.ki),
      BFBELP_NUM("pid.kd", pid.kd),
      BFBELP_NUM("vehicle.v_max", vehicle.v_max),
      BFBELP_NUM("vehicle.a_max", vehicle.a_max),

      BFBELP_NUM("bfbel.alpha", predictor.gains.alpha),
      BFBELP_NUM("bfbel.beta", predictor.gains.beta),
      BFBELP_NUM("bfbel.q_gain", predictor.gains.q_gain),
      BFBELP_NUM("bfbel.c_gain", predictor.gains.c_gain),
      BFBELP_SIZE("bfbel.layers", predictor.layers),
      BFBELP_NUM("bfbel.range_low", predictor.range_low),
      BFBELP_NUM("bfbel.range_high", predictor.range_high),

      BFBELP_SIZE("predictor.window_len", predictor.window_len),
      BFBELP_SIZE("predictor.overlap_len", predictor.overlap_len),
      BFBELP_SIZE("predictor.horizon", predictor.horizon),
      BFBELP_SIZE("predictor.candidates", predictor.candidates),
      BFBELP_NUM("predictor.perturbation_scale", predictor.perturbation_scale),
      BFBELP_SIZE("predictor.training_passes", predictor.training_passes),
      BFBELP_SIZE("predictor.readapt_passes", predictor.readapt_passes),

      BFBELP_SIZE("fusion.window_n", fusion.window_n),
      BFBELP_NUM("fusion.outlier_k", fusion.outlier_k),
      BFBELP_NUM("fusion.agreement_eps", fusion.agreement_eps),
      BFBELP_SIZE("fusion.agreement_count", fusion.agreement_count),
  };
  return table;
}

#undef BFBELP_NUM
#undef BFBELP_SIZE

const char* kObstacleFields[] = {"x", "y", "z", "eta", "rho0", "hard_radius"};

double& obstacle_field(Obstacle& o, const std::string& name) {
  if (name == "x") return o.center.x;
  if (name == "y") return o.center.y;
  if (name == "z") return o.center.z;
  if (name == "eta") return o.eta;
  if (name == "rho0") return o.rho0;
  return o.hard_radius;
}

struct Entry {
  std::string value;
  std::size_t line;
};

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    if (entries.count(key)) throw ConfigError("config key '" + key + "' given twice");
    entries[key] = {value, lineno};
    order.push_back(key);
  }

  ScenarioConfig cfg;
  if (auto it = entries.find("scenario"); it != entries.end()) {
    const std::string& v = it->second.value;
    if (v == "linear") cfg = linear_scenario();
    else if (v == "figure8") cfg = figure_eight_scenario();
    else if (v != "default") bad("scenario", v, "expected linear | figure8 | default");
  }

  std::map<std::size_t, Obstacle> obstacles;
  bool any_obstacle = false;
  for (const auto& key : order) {
    if (key == "scenario") continue;
    const Entry& e = entries[key];
    if (key.rfind("obstacle.", 0) == 0) {
      const auto parts = csv::split(key, '.');
      if (parts.size() != 3) throw ConfigError("unknown config key '" + key + "'");
      const std::string idx_text(parts[1]);
      const std::string field(parts[2]);
      if (std::find(std::begin(kObstacleFields), std::end(kObstacleFields), field) == std::end(kObstacleFields)) {
        throw ConfigError("unknown config key '" + key + "'");
      }
      const std::size_t idx = as_size(key, idx_text);
      obstacle_field(obstacles[idx], field) = as_double(key, e.value);
      any_obstacle = true;
      continue;
    }
    const auto& table = fields();
    const auto f = std::find_if(table.begin(), table.end(), [&](const Field& x) { return x.key == key; });
    if (f == table.end()) throw ConfigError("unknown config key '" + key + "'");
    f->set(cfg, key, e.value);
  }
  if (any_obstacle) {
    cfg.obstacles.obstacles.clear();
    std::size_t expect = 0;
    for (const auto& [idx, o] : obstacles) {
      if (idx != expect) throw ConfigError("config key 'obstacle." + std::to_string(expect) + ".*' missing");
      cfg.obstacles.obstacles.push_back(o);
      ++expect;
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& source) {
  std::istringstream is(text);
  return parse_config(is, source);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ScenarioConfig load_config(const std::string& path) { return parse_config_text(read_file(path), path); }

std::string config_to_text(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "scenario = default\n";
  for (const auto& f : fields()) os << f.key << " = " << f.get(cfg) << '\n';
  for (std::size_t i = 0; i < cfg.obstacles.obstacles.size(); ++i) {
    Obstacle o = cfg.obstacles.obstacles[i];
    for (const char* name : kObstacleFields) {
      os << "obstacle." << i << '.' << name << " = " << csv::fmt(obstacle_field(o, name)) << '\n';
    }
  }
  return os.str();
}

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys{"scenario"};
  for (const auto& f : fields()) keys.push_back(f.key);
  for (const char* name : kObstacleFields) keys.push_back(std::string("obstacle.N.") + name);
  return keys;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace bfbelp
