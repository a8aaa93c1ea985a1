#pragma once

// Bidirectional fuzzy brain emotional learning network.
//
// Each input channel is fuzzified by a bank of Gaussian layers. Two weight
// banks read the memberships: the amygdala bank (v) and the orbitofrontal
// bank (w). The network output is the difference of their weighted sums and
// both banks adapt online from a scalar reward.

#include <cstddef>
#include <span>
#include <vector>

#include "bfbelp/types.hpp"

namespace bfbelp {

/// Learning rates and reward gains.
///
/// The reward is R = q_gain * error + c_gain * u. With the defaults
/// (q = -1, c = 1) and the one-step error (i + u) - i_next this reduces to the
/// observed increment i_next - i, which is the fixed point the adaptation
/// laws converge to. Other gain choices are accepted as configured.
struct BfbelGains {
  double alpha = 0.05;  ///< amygdala learning rate
  double beta = 0.05;   ///< orbitofrontal learning rate
  double q_gain = -1.0;
  double c_gain = 1.0;

  void validate() const;
};

/// Dense channels x layers matrix, row-major.
struct LayerMatrix {
  std::size_t channels = 0;
  std::size_t layers = 0;
  std::vector<double> values;

  LayerMatrix() = default;
  LayerMatrix(std::size_t channels_, std::size_t layers_, double fill = 0.0)
      : channels(channels_), layers(layers_), values(channels_ * layers_, fill) {}

  double& operator()(std::size_t c, std::size_t j) { return values[c * layers + j]; }
  double operator()(std::size_t c, std::size_t j) const { return values[c * layers + j]; }

  std::span<const double> row(std::size_t c) const { return {values.data() + c * layers, layers}; }

  bool same_shape(const LayerMatrix& o) const { return channels == o.channels && layers == o.layers; }
  friend bool operator==(const LayerMatrix&, const LayerMatrix&) = default;
};

/// Gaussian fuzzification parameters. `sigmas` holds the spread used in
/// exp(-(i - mean)^2 / (2 sigma^2)).
struct FuzzyLayerBank {
  LayerMatrix means;
  LayerMatrix sigmas;

  std::size_t channels() const { return means.channels; }
  std::size_t layer_count() const { return means.layers; }
  friend bool operator==(const FuzzyLayerBank&, const FuzzyLayerBank&) = default;
};

struct BfbelNetwork {
  FuzzyLayerBank fuzzy;
  LayerMatrix v;  ///< amygdala weights
  LayerMatrix w;  ///< orbitofrontal weights
  BfbelGains gains;

  std::size_t channels() const { return fuzzy.channels(); }
  friend bool operator==(const BfbelNetwork& a, const BfbelNetwork& b) {
    return a.fuzzy == b.fuzzy && a.v == b.v && a.w == b.w;
  }
};

struct ForwardResult {
  LayerMatrix p;           ///< memberships, every entry in (0, 1]
  std::vector<double> a;   ///< amygdala sum per channel
  std::vector<double> o;   ///< orbitofrontal sum per channel
  std::vector<double> u;   ///< output per channel, u = a - o
};

/// Evenly spaced means over [range_low, range_high] with sigma equal to the
/// mean spacing; a single layer sits at the midpoint with sigma = half width.
/// Weights start at zero. Every channel gets the same layout.
BfbelNetwork init_network(double range_low, double range_high, std::size_t n_layers, const BfbelGains& gains,
                          std::size_t channels = 1);

LayerMatrix membership(const BfbelNetwork& net, std::span<const double> input);

ForwardResult forward(const BfbelNetwork& net, std::span<const double> input);
ForwardResult forward(const BfbelNetwork& net, double input);

double reward(const BfbelNetwork& net, double error, double u);

/// Error of the increment prediction: (i_curr + u) - i_next.
double one_step_error(double i_curr, double i_next, double u);

/// Applies dv = alpha p (R - a) and dw = beta p (u - R) and returns the
/// updated network. For multi-channel networks a, u and R bind to the row's
/// own channel.
BfbelNetwork adapt(const BfbelNetwork& net, const ForwardResult& fwd, std::span<const double> rewards);
BfbelNetwork adapt(const BfbelNetwork& net, const ForwardResult& fwd, double reward_signal);

struct TrainResult {
  BfbelNetwork network;
  std::vector<double> u_history;  ///< one output per consumed step, length window - 1
  std::vector<double> errors;     ///< one-step error per step
};

/// One sequential pass of forward / error / reward / adapt over a
/// single-channel series.
TrainResult train_on_window(const BfbelNetwork& net, std::span<const double> window);

}  // namespace bfbelp
