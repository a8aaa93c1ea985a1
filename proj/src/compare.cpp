#include "bfbelp/compare.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <istream>
#include <ostream>

#include "bfbelp/csv.hpp"
#include "bfbelp/fusion.hpp"
#include "bfbelp/parallel.hpp"
#include "bfbelp/predictor.hpp"
#include "bfbelp/rng.hpp"

namespace bfbelp {

std::size_t compare_cycles(CompareMode mode) { return mode == CompareMode::kShort ? kShortCycles : kLongCycles; }

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Noisy per-agent observation streams of the configured target on the
// nominal tick grid.
class TargetStream {
 public:
  TargetStream(const ScenarioConfig& cfg, std::size_t agents) : cfg_(cfg) {
    for (std::size_t i = 0; i < agents; ++i) sensors_.emplace_back(derive_seed(cfg.seed, {2, i}));
    windows_.resize(agents);
  }

  void advance() {
    const double t = static_cast<double>(tick_) * cfg_.nominal_dt;
    const Vec3 truth = target_position(cfg_.target, t);
    for (std::size_t i = 0; i < windows_.size(); ++i) {
      Vec3 seen = truth;
      if (cfg_.sensor_noise > 0.0) {
        for (std::size_t a = 0; a < kAxes; ++a) seen[a] += sensors_[i].normal(0.0, cfg_.sensor_noise);
      }
      windows_[i].push_back({t, seen});
      while (windows_[i].size() > cfg_.predictor.window_len) windows_[i].pop_front();
    }
    ++tick_;
  }

  bool full() const { return windows_.front().size() >= cfg_.predictor.window_len; }
  long tick() const { return tick_ - 1; }
  ObservationWindow window(std::size_t agent) const {
    const auto& w = windows_[agent];
    return ObservationWindow(std::vector<TimedPosition>(w.begin(), w.end()), cfg_.nominal_dt);
  }
  Vec3 truth_at(long tick) const { return target_position(cfg_.target, static_cast<double>(tick) * cfg_.nominal_dt); }

 private:
  const ScenarioConfig& cfg_;
  std::vector<Rng> sensors_;
  std::vector<std::deque<TimedPosition>> windows_;
  long tick_ = 0;
};

void push_residual(ResidualSeries& r, long tick, const Vec3& forecast, const Vec3& truth) {
  r.forecast_tick.push_back(tick);
  r.x.push_back(forecast.x - truth.x);
  r.y.push_back(forecast.y - truth.y);
  r.z.push_back(forecast.z - truth.z);
}

}  // namespace

CompareResult run_compare(const ScenarioConfig& cfg, CompareMode mode, std::size_t agents, std::size_t workers) {
  cfg.validate();
  if (agents < 1) throw ConfigError("compare needs at least one agent");
  const std::size_t cycles = compare_cycles(mode);
  const long lead = static_cast<long>(cfg.predictor.horizon);

  MethodResult single;
  MethodResult multi;
  MethodResult cubic;
  single.method = "bfbel_single";
  multi.method = "bfbel_multi";
  cubic.method = "cubic_fit";
  double single_total = 0.0;
  double multi_agent_total = 0.0;
  double cubic_total = 0.0;

  TargetStream stream(cfg, agents);
  WorkerPool pool(workers);
  FusionHistory history;
  std::size_t done = 0;
  while (done < cycles) {
    stream.advance();
    const long tick = stream.tick();
    if (!stream.full() || tick % static_cast<long>(cfg.prediction_cadence) != 0) continue;
    const long cycle = tick / static_cast<long>(cfg.prediction_cadence);
    const Vec3 truth = stream.truth_at(tick + lead);

    const ObservationWindow w0 = stream.window(0);
    const Prediction ps = predict(w0, cfg.predictor, derive_seed(cfg.seed, {4, 0, static_cast<std::uint64_t>(cycle)}));
    single_total += ps.elapsed;
    push_residual(single.residuals, tick + lead, ps.future.back().position, truth);

    const Prediction pc = baseline_curvefit_predict(w0, cfg.predictor.horizon);
    cubic_total += pc.elapsed;
    push_residual(cubic.residuals, tick + lead, pc.future.back().position, truth);

    std::vector<Prediction> batch(agents);
    const auto t0 = Clock::now();
    pool.run(agents, [&](std::size_t i) {
      batch[i] = predict(stream.window(i), cfg.predictor,
                         derive_seed(cfg.seed, {4, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(cycle)}));
    });
    multi.batch_wall_s += seconds_since(t0);
    PredictionPool arrivals(cycle);
    for (std::size_t i = 0; i < agents; ++i) {
      batch[i].agent_id = static_cast<int>(i);
      batch[i].cycle_index = cycle;
      batch[i].origin_tick = tick;
      multi_agent_total += batch[i].elapsed;
      arrivals.add(std::move(batch[i]));
    }
    const auto fused = fuse_cycle(arrivals, history, cfg.fusion);
    push_residual(multi.residuals, tick + lead, fused->future.back().position, truth);
    ++done;
  }

  const double n = static_cast<double>(cycles);
  single.predictions = single.cycles = cycles;
  single.mean_predict_s = single_total / n;
  single.batch_wall_s = single_total;
  single.per_prediction_s = single.mean_predict_s;

  cubic.predictions = cubic.cycles = cycles;
  cubic.mean_predict_s = cubic_total / n;
  cubic.batch_wall_s = cubic_total;
  cubic.per_prediction_s = cubic.mean_predict_s;

  multi.cycles = cycles;
  multi.predictions = cycles * agents;
  multi.mean_predict_s = multi_agent_total / static_cast<double>(multi.predictions);
  multi.effective_parallelism = multi.batch_wall_s > 0.0 ? multi_agent_total / multi.batch_wall_s : 1.0;
  multi.per_prediction_s = single.mean_predict_s / multi.effective_parallelism;

  CompareResult r;
  r.mode = mode;
  r.methods = {std::move(single), std::move(multi), std::move(cubic)};
  return r;
}

namespace {

constexpr const char* kTimingHeader = "method,predictions,cycles,mean_predict_s,effective_parallelism,per_prediction_s";
constexpr const char* kIntervalHeader = "method,axis,n,mean,ci_lo,ci_hi,half_width,p";

}  // namespace

void write_timing_table(std::ostream& os, const CompareResult& r) {
  os << kTimingHeader << '\n';
  for (const auto& m : r.methods) {
    os << m.method << ',' << m.predictions << ',' << m.cycles << ',' << csv::fmt(m.mean_predict_s) << ','
       << csv::fmt(m.effective_parallelism) << ',' << csv::fmt(m.per_prediction_s) << '\n';
  }
}

void write_interval_table(std::ostream& os, const CompareResult& r) {
  os << kIntervalHeader << '\n';
  for (const auto& m : r.methods) {
    const std::vector<double>* axes[] = {&m.residuals.x, &m.residuals.y};
    const char* names[] = {"x", "y"};
    for (int a = 0; a < 2; ++a) {
      const Interval ci = confidence_interval(*axes[a]);
      const SampleMoments mo = moments(*axes[a]);
      os << m.method << ',' << names[a] << ',' << mo.n << ',' << csv::fmt(mo.mean) << ',' << csv::fmt(ci.lo) << ','
         << csv::fmt(ci.hi) << ',' << csv::fmt(ci.half_width()) << ',' << csv::fmt(t_test(*axes[a]).p) << '\n';
    }
  }
}

std::vector<TimingRow> read_timing_table(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTimingHeader) throw InputError("timing table line 1: unexpected header");
  std::vector<TimingRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = "timing table line " + std::to_string(lineno);
    const auto f = csv::split(line);
    if (f.size() != 6) throw InputError(ctx + ": expected 6 fields");
    rows.push_back({std::string(f[0]), csv::to_uint(f[1], ctx), csv::to_uint(f[2], ctx), csv::to_double(f[3], ctx),
                    csv::to_double(f[4], ctx), csv::to_double(f[5], ctx)});
  }
  return rows;
}

std::vector<IntervalRow> read_interval_table(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kIntervalHeader) throw InputError("interval table line 1: unexpected header");
  std::vector<IntervalRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = "interval table line " + std::to_string(lineno);
    const auto f = csv::split(line);
    if (f.size() != 8) throw InputError(ctx + ": expected 8 fields");
    rows.push_back({std::string(f[0]), std::string(f[1]), csv::to_uint(f[2], ctx), csv::to_double(f[3], ctx),
                    csv::to_double(f[4], ctx), csv::to_double(f[5], ctx), csv::to_double(f[6], ctx),
                    csv::to_double(f[7], ctx)});
  }
  return rows;
}

ScalingResult measure_scaling(const ScenarioConfig& cfg, std::size_t tasks, std::size_t workers) {
  cfg.validate();
  if (tasks == 0 || workers == 0) throw ConfigError("scaling needs tasks >= 1 and workers >= 1");
  TargetStream stream(cfg, 1);
  std::vector<ObservationWindow> windows;
  while (windows.size() < tasks) {
    stream.advance();
    if (stream.full()) windows.push_back(stream.window(0));
  }
  auto timed_batch = [&](std::size_t w, std::vector<Prediction>& out) {
    WorkerPool pool(w);
    out.assign(tasks, Prediction{});
    const auto t0 = Clock::now();
    pool.run(tasks, [&](std::size_t i) {
      out[i] = predict(windows[i], cfg.predictor, derive_seed(cfg.seed, {5, static_cast<std::uint64_t>(i)}));
    });
    return seconds_since(t0);
  };
  std::vector<Prediction> serial, parallel;
  ScalingResult r;
  r.tasks = tasks;
  r.workers = workers;
  // One untimed warm-up, then alternating repeats; the median of each side
  // is reported so cache and frequency effects do not favour either one.
  timed_batch(1, serial);
  constexpr int kRepeats = 3;
  std::vector<double> ts, tp;
  for (int k = 0; k < kRepeats; ++k) {
    ts.push_back(timed_batch(1, serial));
    tp.push_back(timed_batch(workers, parallel));
  }
  std::sort(ts.begin(), ts.end());
  std::sort(tp.begin(), tp.end());
  r.serial_s = ts[kRepeats / 2];
  r.parallel_s = tp[kRepeats / 2];
  for (std::size_t i = 0; i < tasks; ++i) {
    if (!(serial[i].future == parallel[i].future)) throw SimulationFault(0, "parallel prediction differs from serial");
  }
  return r;
}

}  // namespace bfbelp
