#include "bfbelp/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bfbelp/csv.hpp"

namespace bfbelp {

double MetricSeries::mean() const {
  if (value.empty()) return 0.0;
  double s = 0.0;
  for (double v : value) s += v;
  return s / static_cast<double>(value.size());
}

double MetricSeries::max() const {
  return value.empty() ? 0.0 : *std::max_element(value.begin(), value.end());
}

double MetricSeries::mean_before(double t_end) const {
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (time[i] < t_end) {
      s += value[i];
      ++n;
    }
  }
  return n ? s / static_cast<double>(n) : 0.0;
}

double MetricSeries::longest_run_below(double threshold) const {
  double best = 0.0;
  std::size_t start = 0;
  bool open = false;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] < threshold) {
      if (!open) {
        start = i;
        open = true;
      }
      best = std::max(best, time[i] - time[start]);
    } else {
      open = false;
    }
  }
  return best;
}

namespace {

void require_pairs(const SimLog& log) {
  for (const auto& t : log.ticks) {
    if (t.drones.size() < 2) throw InputError("swarm metrics need at least two drones");
  }
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a;
}

}  // namespace

MetricSeries group_metric(const SimLog& log) {
  require_pairs(log);
  MetricSeries out;
  for (const auto& t : log.ticks) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < t.drones.size(); ++i) {
      for (std::size_t j = i + 1; j < t.drones.size(); ++j) {
        sum += distance(t.drones[i].position, t.drones[j].position);
        ++pairs;
      }
    }
    out.time.push_back(t.time);
    out.value.push_back(sum / static_cast<double>(pairs));
  }
  return out;
}

MetricSeries order_metric(const SimLog& log, double speed_floor) {
  require_pairs(log);
  if (log.ticks.size() < 2) throw InputError("order metric needs at least two ticks");
  MetricSeries out;
  out.time.push_back(log.ticks.front().time);
  out.value.push_back(0.0);
  for (std::size_t k = 1; k < log.ticks.size(); ++k) {
    const auto& prev = log.ticks[k - 1];
    const auto& cur = log.ticks[k];
    const double dt = cur.time - prev.time;
    std::vector<double> omega(cur.drones.size(), 0.0);
    for (std::size_t i = 0; i < cur.drones.size(); ++i) {
      const Vec3 v0 = prev.drones[i].velocity;
      const Vec3 v1 = cur.drones[i].velocity;
      if (std::hypot(v0.x, v0.y) < speed_floor || std::hypot(v1.x, v1.y) < speed_floor) continue;
      omega[i] = wrap_angle(std::atan2(v1.y, v1.x) - std::atan2(v0.y, v0.x)) / dt;
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
      for (std::size_t j = i + 1; j < omega.size(); ++j) {
        sum += std::fabs(omega[i] - omega[j]);
        ++pairs;
      }
    }
    out.time.push_back(cur.time);
    out.value.push_back(sum / static_cast<double>(pairs));
  }
  return out;
}

Vec3 tracking_error(const SimLog& log) {
  Vec3 sum;
  std::size_t n = 0;
  for (const auto& t : log.ticks) {
    for (const auto& d : t.drones) {
      for (std::size_t a = 0; a < kAxes; ++a) sum[a] += std::fabs(d.position[a] - t.target[a]);
      ++n;
    }
  }
  return n ? sum * (1.0 / static_cast<double>(n)) : Vec3{};
}

void ResidualSeries::append(const ResidualSeries& other) {
  forecast_tick.insert(forecast_tick.end(), other.forecast_tick.begin(), other.forecast_tick.end());
  x.insert(x.end(), other.x.begin(), other.x.end());
  y.insert(y.end(), other.y.begin(), other.y.end());
  z.insert(z.end(), other.z.begin(), other.z.end());
}

ResidualSeries fused_residuals(const SimLog& log) {
  ResidualSeries out;
  for (const auto& t : log.ticks) {
    if (!t.fusion.present || !t.fusion.fresh) continue;
    const long k = t.fusion.lead_tick;
    if (k < 0 || k >= static_cast<long>(log.ticks.size())) continue;
    const Vec3 truth = log.ticks[static_cast<std::size_t>(k)].target;
    out.forecast_tick.push_back(k);
    out.x.push_back(t.fusion.lead_position.x - truth.x);
    out.y.push_back(t.fusion.lead_position.y - truth.y);
    out.z.push_back(t.fusion.lead_position.z - truth.z);
  }
  return out;
}

SeparationScan separation_scan(const SimLog& log, double threshold) {
  SeparationScan s;
  s.min_separation = std::numeric_limits<double>::infinity();
  for (const auto& t : log.ticks) {
    for (std::size_t i = 0; i < t.drones.size(); ++i) {
      for (std::size_t j = i + 1; j < t.drones.size(); ++j) {
        const double d = distance(t.drones[i].position, t.drones[j].position);
        s.min_separation = std::min(s.min_separation, d);
        if (d < threshold) ++s.collisions;
      }
    }
  }
  if (!std::isfinite(s.min_separation)) s.min_separation = 0.0;
  return s;
}

std::size_t hard_radius_violations(const SimLog& log) {
  std::size_t n = 0;
  for (const auto& t : log.ticks) {
    for (const auto& d : t.drones) {
      for (const auto& o : log.obstacles) {
        if (horizontal_distance(d.position, o.center) < o.hard_radius) ++n;
      }
    }
  }
  return n;
}

namespace {

struct MotionSpread {
  double sd = 0.0;
  double var = 0.0;
};

MotionSpread motion_spread(const SimLog& log) {
  MotionSpread out;
  for (std::size_t a = 0; a < kAxes; ++a) {
    std::vector<double> dev;
    for (const auto& t : log.ticks) {
      for (const auto& d : t.drones) dev.push_back(d.position[a] - t.target[a]);
    }
    const SampleMoments m = moments(dev);
    out.sd += m.sd / kAxes;
    out.var += m.sd * m.sd / kAxes;
  }
  return out;
}

void fill_residual_stats(TrialStats& s, const ResidualSeries& r) {
  s.residual_count = r.size();
  if (r.size() < 2) {
    s.ci_x = s.ci_y = Interval{};
    s.p_x = s.p_y = 1.0;
    return;
  }
  s.ci_x = confidence_interval(r.x);
  s.ci_y = confidence_interval(r.y);
  s.p_x = t_test(r.x).p;
  s.p_y = t_test(r.y).p;
}

}  // namespace

TrialStats summarize_trial(const SimLog& log, std::uint64_t seed) {
  return summarize_trial(log, fused_residuals(log), seed);
}

TrialStats summarize_trial(const SimLog& log, const ResidualSeries& residuals, std::uint64_t seed) {
  TrialStats s;
  s.seed = seed;
  fill_residual_stats(s, residuals);
  s.tracking = tracking_error(log);
  const MotionSpread spread = motion_spread(log);
  s.motion_sd = spread.sd;
  s.motion_var = spread.var;
  const SeparationScan scan = separation_scan(log);
  s.collisions = scan.collisions;
  s.min_separation = scan.min_separation;
  return s;
}

TrialStats pool_trials(const std::vector<TrialStats>& trials, const std::vector<ResidualSeries>& residuals) {
  if (trials.empty()) throw InputError("pool_trials needs at least one trial");
  if (trials.size() == 1) return trials.front();
  ResidualSeries all;
  for (const auto& r : residuals) all.append(r);
  TrialStats s;
  s.seed = trials.front().seed;
  fill_residual_stats(s, all);
  const double n = static_cast<double>(trials.size());
  s.min_separation = std::numeric_limits<double>::infinity();
  for (const auto& t : trials) {
    s.tracking = s.tracking + t.tracking * (1.0 / n);
    s.motion_sd += t.motion_sd / n;
    s.motion_var += t.motion_var / n;
    s.collisions += t.collisions;
    s.min_separation = std::min(s.min_separation, t.min_separation);
  }
  return s;
}

namespace {

constexpr const char* kStatsHeader =
    "seed,residual_count,ci_x_lo,ci_x_hi,ci_y_lo,ci_y_hi,p_x,p_y,track_x,track_y,track_z,motion_sd,motion_var,"
    "collisions,min_separation";

}  // namespace

void write_trial_stats_csv(std::ostream& os, const std::vector<TrialStats>& rows) {
  using csv::fmt;
  os << kStatsHeader << '\n';
  for (const auto& s : rows) {
    os << fmt(s.seed) << ',' << fmt(static_cast<std::uint64_t>(s.residual_count)) << ',' << fmt(s.ci_x.lo) << ','
       << fmt(s.ci_x.hi) << ',' << fmt(s.ci_y.lo) << ',' << fmt(s.ci_y.hi) << ',' << fmt(s.p_x) << ','
       << fmt(s.p_y) << ',' << fmt(s.tracking.x) << ',' << fmt(s.tracking.y) << ',' << fmt(s.tracking.z) << ','
       << fmt(s.motion_sd) << ',' << fmt(s.motion_var) << ',' << fmt(static_cast<std::uint64_t>(s.collisions))
       << ',' << fmt(s.min_separation) << '\n';
  }
}

std::vector<TrialStats> read_trial_stats_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kStatsHeader) throw InputError("stats csv line 1: unexpected header");
  std::vector<TrialStats> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = "stats csv line " + std::to_string(lineno);
    const auto f = csv::split(line);
    if (f.size() != 15) throw InputError(ctx + ": expected 15 fields");
    TrialStats s;
    s.seed = csv::to_uint(f[0], ctx);
    s.residual_count = csv::to_uint(f[1], ctx);
    s.ci_x = {csv::to_double(f[2], ctx), csv::to_double(f[3], ctx)};
    s.ci_y = {csv::to_double(f[4], ctx), csv::to_double(f[5], ctx)};
    s.p_x = csv::to_double(f[6], ctx);
    s.p_y = csv::to_double(f[7], ctx);
    s.tracking = {csv::to_double(f[8], ctx), csv::to_double(f[9], ctx), csv::to_double(f[10], ctx)};
    s.motion_sd = csv::to_double(f[11], ctx);
    s.motion_var = csv::to_double(f[12], ctx);
    s.collisions = csv::to_uint(f[13], ctx);
    s.min_separation = csv::to_double(f[14], ctx);
    rows.push_back(s);
  }
  return rows;
}

std::string format_trial_table(const TrialStats& s, const std::string& title) {
  std::ostringstream os;
  char buf[160];
  os << title << '\n';
  auto row = [&](const char* name, const char* fmt, auto... v) {
    std::snprintf(buf, sizeof buf, fmt, v...);
    os << "  " << name;
    for (std::size_t i = std::string(name).size(); i < 34; ++i) os << ' ';
    os << buf << '\n';
  };
  row("Confidence interval X", "[%.4f, %.4f]", s.ci_x.lo, s.ci_x.hi);
  row("Confidence interval Y", "[%.4f, %.4f]", s.ci_y.lo, s.ci_y.hi);
  row("T-test p X", "%.4f", s.p_x);
  row("T-test p Y", "%.4f", s.p_y);
  row("Tracking error X", "%.4f", s.tracking.x);
  row("Tracking error Y", "%.4f", s.tracking.y);
  row("Tracking error Z", "%.4f", s.tracking.z);
  row("Mean std-dev of motion", "%.4f", s.motion_sd);
  row("Mean variance of motion", "%.4f", s.motion_var);
  row("Collisions (< 0.5 m)", "%zu", s.collisions);
  row("Minimum separation", "%.4f", s.min_separation);
  row("Residual samples", "%zu", s.residual_count);
  return os.str();
}

}  // namespace bfbelp
