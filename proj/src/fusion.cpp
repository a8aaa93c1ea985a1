#include "bfbelp/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bfbelp {

void FusionConfig::validate() const {
  if (window_n == 0) throw ConfigError("fusion.window_n must be >= 1");
  if (!(outlier_k > 0.0)) throw ConfigError("fusion.outlier_k must be > 0");
  if (!(agreement_eps >= 0.0)) throw ConfigError("fusion.agreement_eps must be >= 0");
  if (agreement_count < 1) throw ConfigError("fusion.agreement_count must be >= 1");
}

void PredictionPool::add(Prediction p) {
  const int id = p.agent_id;
  if (!entries_.emplace(id, std::move(p)).second) {
    throw InputError("agent " + std::to_string(id) + " already submitted this cycle");
  }
}

namespace {

long forecast_tick(const Prediction& p, std::size_t k) { return p.origin_tick + static_cast<long>(k) + 1; }

struct KeyStats {
  Vec3 mean;
  Vec3 sd;
  std::size_t count = 0;
};

// Mean and sample standard deviation per forecast tick across the given agents.
std::map<long, KeyStats> per_tick_stats(const PredictionPool& pool) {
  std::map<long, std::vector<Vec3>> by_tick;
  for (const auto& [id, p] : pool.entries()) {
    for (std::size_t k = 0; k < p.future.size(); ++k) by_tick[forecast_tick(p, k)].push_back(p.future[k].position);
  }
  std::map<long, KeyStats> out;
  for (const auto& [tick, values] : by_tick) {
    KeyStats s;
    s.count = values.size();
    for (const auto& v : values) s.mean += v;
    s.mean *= 1.0 / static_cast<double>(s.count);
    if (s.count > 1) {
      for (std::size_t a = 0; a < kAxes; ++a) {
        double ss = 0.0;
        for (const auto& v : values) ss += (v[a] - s.mean[a]) * (v[a] - s.mean[a]);
        s.sd[a] = std::sqrt(ss / static_cast<double>(s.count - 1));
      }
    }
    out.emplace(tick, s);
  }
  return out;
}

// Mean Euclidean distance between two forecasts over the ticks both cover.
double mean_separation(const Prediction& a, const Prediction& b) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.future.size(); ++i) {
    const long t = forecast_tick(a, i);
    const long j = t - b.origin_tick - 1;
    if (j < 0 || j >= static_cast<long>(b.future.size())) continue;
    sum += distance(a.future[i].position, b.future[static_cast<std::size_t>(j)].position);
    ++n;
  }
  return n == 0 ? INFINITY : sum / static_cast<double>(n);
}

}  // namespace

OutlierSplit filter_outliers(const PredictionPool& pool, const FusionConfig& cfg) {
  if (pool.empty()) throw InputError("cannot filter an empty prediction pool");
  OutlierSplit split;
  if (pool.size() <= 2) {
    for (const auto& [id, p] : pool.entries()) split.retained.push_back(id);
    return split;
  }

  const auto stats = per_tick_stats(pool);
  std::vector<int> flagged;
  for (const auto& [id, p] : pool.entries()) {
    bool outlier = false;
    for (std::size_t a = 0; a < kAxes && !outlier; ++a) {
      double dev = 0.0;
      double sd = 0.0;
      std::size_t n = 0;
      for (std::size_t k = 0; k < p.future.size(); ++k) {
        const KeyStats& s = stats.at(forecast_tick(p, k));
        if (s.count < 3) continue;
        dev += std::abs(p.future[k].position[a] - s.mean[a]);
        sd += s.sd[a];
        ++n;
      }
      if (n == 0) continue;
      dev /= static_cast<double>(n);
      sd /= static_cast<double>(n);
      outlier = sd > 0.0 && dev > cfg.outlier_k * sd;
    }
    (outlier ? flagged : split.retained).push_back(id);
  }

  // Agreement exception: flagged agents that cluster together are kept.
  std::vector<int> label(flagged.size(), -1);
  int next_label = 0;
  for (std::size_t i = 0; i < flagged.size(); ++i) {
    if (label[i] >= 0) continue;
    label[i] = next_label;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < flagged.size(); ++j) {
        if (label[j] >= 0) continue;
        const double d =
            mean_separation(pool.entries().at(flagged[cur]), pool.entries().at(flagged[j]));
        if (d <= cfg.agreement_eps) {
          label[j] = next_label;
          stack.push_back(j);
        }
      }
    }
    ++next_label;
  }
  for (std::size_t i = 0; i < flagged.size(); ++i) {
    const auto size = static_cast<std::size_t>(std::count(label.begin(), label.end(), label[i]));
    (size >= cfg.agreement_count && size >= 2 ? split.retained : split.rejected).push_back(flagged[i]);
  }
  std::sort(split.retained.begin(), split.retained.end());
  std::sort(split.rejected.begin(), split.rejected.end());
  return split;
}

double rolling_average(std::span<const double> history, std::size_t n) {
  if (history.empty()) throw InputError("rolling average of an empty history");
  if (n == 0) throw ConfigError("rolling average depth must be >= 1");
  const std::size_t take = std::min(n, history.size());
  double sum = 0.0;
  for (std::size_t k = history.size() - take; k < history.size(); ++k) sum += history[k];
  return sum / static_cast<double>(take);
}

Vec3 rolling_average(std::span<const Vec3> history, std::size_t n) {
  if (history.empty()) throw InputError("rolling average of an empty history");
  if (n == 0) throw ConfigError("rolling average depth must be >= 1");
  const std::size_t take = std::min(n, history.size());
  Vec3 sum;
  for (std::size_t k = history.size() - take; k < history.size(); ++k) sum += history[k];
  return sum * (1.0 / static_cast<double>(take));
}

Vec3 FusedPrediction::sample_at(double t) const {
  if (future.empty()) throw InputError("fused prediction has no samples");
  if (future.size() == 1) return future.front().position;
  std::size_t hi = 1;
  while (hi + 1 < future.size() && future[hi].t < t) ++hi;
  const TimedPosition& p0 = future[hi - 1];
  const TimedPosition& p1 = future[hi];
  const double span = p1.t - p0.t;
  if (!(span > 0.0)) return p1.position;
  const double s = (t - p0.t) / span;
  return p0.position + (p1.position - p0.position) * s;
}

Vec3 FusionHistory::push(long forecast_tick, const Vec3& value, std::size_t n) {
  auto& series = by_tick_[forecast_tick];
  series.push_back(value);
  while (series.size() > n) series.pop_front();
  const std::vector<Vec3> flat(series.begin(), series.end());
  return rolling_average(std::span<const Vec3>(flat), n);
}

void FusionHistory::prune_before(long tick) { by_tick_.erase(by_tick_.begin(), by_tick_.lower_bound(tick)); }

std::optional<FusedPrediction> fuse_cycle(const PredictionPool& pool, FusionHistory& history,
                                          const FusionConfig& cfg) {
  if (pool.empty()) {
    if (!history.last()) return std::nullopt;
    FusedPrediction prev = *history.last();
    prev.stale = true;
    return prev;
  }

  const OutlierSplit split = filter_outliers(pool, cfg);
  long origin = pool.entries().at(split.retained.front()).origin_tick;
  for (int id : split.retained) origin = std::max(origin, pool.entries().at(id).origin_tick);

  struct Accum {
    Vec3 position;
    double t = 0.0;
    std::size_t n = 0;
  };
  std::map<long, Accum> acc;
  for (int id : split.retained) {
    const Prediction& p = pool.entries().at(id);
    for (std::size_t k = 0; k < p.future.size(); ++k) {
      const long tick = forecast_tick(p, k);
      if (tick <= origin) continue;
      Accum& a = acc[tick];
      a.position += p.future[k].position;
      a.t += p.future[k].t;
      ++a.n;
    }
  }

  FusedPrediction fused;
  fused.origin_tick = origin;
  fused.contributing_agents = split.retained;
  fused.rejected_agents = split.rejected;
  for (const auto& [tick, a] : acc) {
    const double inv = 1.0 / static_cast<double>(a.n);
    const Vec3 mean = a.position * inv;
    fused.future.push_back({a.t * inv, history.push(tick, mean, cfg.window_n)});
  }
  history.prune_before(origin + 1);
  history.set_last(fused);
  return fused;
}

}  // namespace bfbelp
