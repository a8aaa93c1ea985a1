#include "bfbelp/predictor.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "bfbelp/rng.hpp"

namespace bfbelp {

void PredictorConfig::validate() const {
  if (overlap_len < 2) throw ConfigError("predictor.overlap_len must be >= 2");
  if (window_len < overlap_len + 5) throw ConfigError("predictor.window_len must be >= overlap_len + 5");
  if (horizon == 0) throw ConfigError("predictor.horizon must be >= 1");
  if (candidates == 0) throw ConfigError("predictor.candidates must be >= 1");
  if (training_passes == 0) throw ConfigError("predictor.training_passes must be >= 1");
  if (readapt_passes == 0) throw ConfigError("predictor.readapt_passes must be >= 1");
  if (!(std::isfinite(perturbation_scale) && perturbation_scale >= 0.0)) {
    throw ConfigError("predictor.perturbation_scale must be finite and >= 0");
  }
  if (layers == 0) throw ConfigError("bfbel.layers must be >= 1");
  if (!(range_low < range_high)) throw ConfigError("bfbel.range_low must be < bfbel.range_high");
  gains.validate();
}

ObservationWindow::ObservationWindow(std::vector<TimedPosition> samples, double nominal_dt)
    : samples_(std::move(samples)), nominal_dt_(nominal_dt) {}

void ObservationWindow::validate(std::size_t overlap_len) const {
  if (samples_.size() < overlap_len + 5) {
    throw InputError("observation window has " + std::to_string(samples_.size()) + " samples, needs " +
                     std::to_string(overlap_len + 5));
  }
  if (!(nominal_dt_ > 0.0)) throw InputError("nominal_dt must be positive");
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    if (!is_finite(samples_[k].position) || !std::isfinite(samples_[k].t)) {
      throw InputError("non-finite observation at index " + std::to_string(k));
    }
    if (k > 0 && !(samples_[k].t > samples_[k - 1].t)) {
      throw InputError("observation timestamps must be strictly increasing");
    }
  }
}

std::vector<double> ObservationWindow::axis(std::size_t a) const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.position[a]);
  return out;
}

std::vector<double> roll_forward(double anchor, std::span<const double> deltas) {
  std::vector<double> out;
  out.reserve(deltas.size());
  double acc = anchor;
  for (double d : deltas) {
    acc += d;
    out.push_back(acc);
  }
  return out;
}

double discrete_curvature(std::span<const Vec3> path, std::size_t k) {
  if (k == 0 || k + 1 >= path.size()) throw InputError("curvature needs an interior sample");
  const double dx = 0.5 * (path[k + 1].x - path[k - 1].x);
  const double dy = 0.5 * (path[k + 1].y - path[k - 1].y);
  const double ddx = path[k + 1].x - 2.0 * path[k].x + path[k - 1].x;
  const double ddy = path[k + 1].y - 2.0 * path[k].y + path[k - 1].y;
  const double denom = std::pow(dx * dx + dy * dy, 1.5);
  if (denom < 1e-9) return 0.0;
  return std::abs(dx * ddy - dy * ddx) / denom;
}

ComparisonError comparison_error(std::span<const Vec3> f_overlap, std::span<const Vec3> c_series) {
  if (f_overlap.size() != c_series.size()) throw InputError("comparison series lengths differ");
  if (f_overlap.empty()) throw InputError("comparison series are empty");
  const std::size_t n = f_overlap.size();

  ComparisonError e;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = f_overlap[k].x - c_series[k].x;
    const double dy = f_overlap[k].y - c_series[k].y;
    e.e1 += dx * dx + dy * dy;
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double fx = f_overlap[k].x - f_overlap[k - 1].x;
    const double fy = f_overlap[k].y - f_overlap[k - 1].y;
    const double cx = c_series[k].x - c_series[k - 1].x;
    const double cy = c_series[k].y - c_series[k - 1].y;
    e.e2 += (fx - cx) + (fy - cy);
  }
  double kappa_f = 0.0;
  double kappa_c = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    kappa_f += discrete_curvature(f_overlap, k);
    kappa_c += discrete_curvature(c_series, k);
  }
  e.e3 = kappa_f - kappa_c;
  e.total = e.e1 + e.e2 + e.e3;
  return e;
}

AxisNetworks train_axes(const ObservationWindow& window, const PredictorConfig& cfg) {
  AxisNetworks nets;
  for (std::size_t a = 0; a < kAxes; ++a) {
    const std::vector<double> series = window.axis(a);
    BfbelNetwork net = init_network(cfg.range_low, cfg.range_high, cfg.layers, cfg.gains);
    for (std::size_t pass = 0; pass < cfg.training_passes; ++pass) net = train_on_window(net, series).network;
    nets.axis[a] = std::move(net);
  }
  return nets;
}

std::vector<PredictionCandidate> generate_candidates(const AxisNetworks& nets, const ObservationWindow& window,
                                                     std::size_t count, std::size_t horizon, std::uint64_t seed,
                                                     const PredictorConfig& cfg) {
  if (count == 0) throw ConfigError("candidate count must be >= 1");
  window.validate(cfg.overlap_len);

  const std::size_t m = window.size();
  const std::size_t overlap = cfg.overlap_len;
  const std::size_t anchor_index = m - 1 - overlap;
  const std::size_t span = overlap + horizon;

  std::vector<double> series[kAxes];
  for (std::size_t a = 0; a < kAxes; ++a) series[a] = window.axis(a);

  std::vector<Vec3> c_series;
  for (std::size_t k = m - overlap; k < m; ++k) c_series.push_back(window.samples()[k].position);

  std::vector<PredictionCandidate> out;
  out.reserve(count);
  for (std::size_t id = 0; id < count; ++id) {
    Rng rng(derive_seed(seed, {id}));
    PredictionCandidate cand;
    cand.seed_id = id;
    cand.f_series.assign(span, Vec3{});
    for (std::size_t a = 0; a < kAxes; ++a) {
      BfbelNetwork net = nets.axis[a];
      if (cfg.perturbation_scale > 0.0) {
        for (double& v : net.v.values) v += rng.normal(0.0, cfg.perturbation_scale);
        for (double& w : net.w.values) w += rng.normal(0.0, cfg.perturbation_scale);
      }
      for (std::size_t pass = 1; pass < cfg.readapt_passes; ++pass) net = train_on_window(net, series[a]).network;
      const TrainResult trained = train_on_window(net, series[a]);
      const CubicFit fit = fit_cubic_or_linear(trained.u_history);
      const std::vector<double> deltas = extrapolate_u(fit, anchor_index, span);
      const std::vector<double> path = roll_forward(series[a][anchor_index], deltas);
      for (std::size_t k = 0; k < span; ++k) cand.f_series[k][a] = path[k];
    }

    const std::span<const Vec3> f_overlap(cand.f_series.data(), overlap);
    cand.error = comparison_error(f_overlap, c_series);
    // The vertical axis only contributes through the squared-difference term.
    double e1_z = 0.0;
    for (std::size_t k = 0; k < overlap; ++k) {
      const double dz = cand.f_series[k].z - c_series[k].z;
      e1_z += dz * dz;
    }
    cand.error.e1 += e1_z;
    cand.error.total = cand.error.e1 + cand.error.e2 + cand.error.e3;
    out.push_back(std::move(cand));
  }
  return out;
}

const PredictionCandidate& select_best(std::span<const PredictionCandidate> candidates) {
  if (candidates.empty()) throw InputError("no candidates to select from");
  const PredictionCandidate* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.total_error() < best->total_error() ||
        (c.total_error() == best->total_error() && c.seed_id < best->seed_id)) {
      best = &c;
    }
  }
  return *best;
}

namespace {

std::vector<TimedPosition> continue_timestamps(const ObservationWindow& window, std::span<const Vec3> positions) {
  const double t_last = window.samples().back().t;
  std::vector<TimedPosition> future;
  future.reserve(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) {
    future.push_back({t_last + static_cast<double>(k + 1) * window.nominal_dt(), positions[k]});
  }
  return future;
}

}  // namespace

Prediction predict(const ObservationWindow& window, const PredictorConfig& cfg, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  window.validate(cfg.overlap_len);

  const AxisNetworks nets = train_axes(window, cfg);
  const std::vector<PredictionCandidate> cands =
      generate_candidates(nets, window, cfg.candidates, cfg.horizon, seed, cfg);
  const PredictionCandidate& best = select_best(cands);

  Prediction p;
  p.future = continue_timestamps(window, std::span<const Vec3>(best.f_series).subspan(cfg.overlap_len));
  p.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return p;
}

Prediction baseline_curvefit_predict(const ObservationWindow& window, std::size_t horizon) {
  const auto start = std::chrono::steady_clock::now();
  if (window.size() < 4) throw InputError("curve-fit baseline needs at least 4 observations");
  if (horizon == 0) throw InputError("horizon must be >= 1");
  for (std::size_t k = 1; k < window.size(); ++k) {
    if (!(window.samples()[k].t > window.samples()[k - 1].t)) {
      throw InputError("observation timestamps must be strictly increasing");
    }
  }

  std::vector<Vec3> positions(horizon);
  for (std::size_t a = 0; a < kAxes; ++a) {
    const CubicFit fit = fit_cubic(window.axis(a));
    const std::vector<double> ahead = extrapolate_u(fit, window.size(), horizon);
    for (std::size_t k = 0; k < horizon; ++k) positions[k][a] = ahead[k];
  }
  Prediction p;
  p.future = continue_timestamps(window, positions);
  p.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return p;
}

}  // namespace bfbelp
