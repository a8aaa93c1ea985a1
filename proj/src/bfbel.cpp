#include "bfbelp/bfbel.hpp"

#include <cmath>
#include <string>

#include "bfbelp/types.hpp"

namespace bfbelp {

void BfbelGains::validate() const {
  if (!(std::isfinite(alpha) && alpha >= 0.0)) throw ConfigError("bfbel.alpha must be finite and >= 0");
  if (!(std::isfinite(beta) && beta >= 0.0)) throw ConfigError("bfbel.beta must be finite and >= 0");
  if (!std::isfinite(q_gain)) throw ConfigError("bfbel.q_gain must be finite");
  if (!std::isfinite(c_gain)) throw ConfigError("bfbel.c_gain must be finite");
}

BfbelNetwork init_network(double range_low, double range_high, std::size_t n_layers, const BfbelGains& gains,
                          std::size_t channels) {
  if (!(std::isfinite(range_low) && std::isfinite(range_high) && range_low < range_high)) {
    throw ConfigError("membership range must satisfy low < high");
  }
  if (n_layers == 0) throw ConfigError("layer count must be >= 1");
  if (channels == 0) throw ConfigError("channel count must be >= 1");
  gains.validate();

  BfbelNetwork net;
  net.gains = gains;
  net.fuzzy.means = LayerMatrix(channels, n_layers);
  net.fuzzy.sigmas = LayerMatrix(channels, n_layers);
  const double width = range_high - range_low;
  const double spacing = n_layers > 1 ? width / static_cast<double>(n_layers - 1) : width / 2.0;
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t j = 0; j < n_layers; ++j) {
      net.fuzzy.means(c, j) = n_layers > 1 ? range_low + spacing * static_cast<double>(j) : range_low + width / 2.0;
      net.fuzzy.sigmas(c, j) = spacing;
    }
  }
  net.v = LayerMatrix(channels, n_layers);
  net.w = LayerMatrix(channels, n_layers);
  return net;
}

LayerMatrix membership(const BfbelNetwork& net, std::span<const double> input) {
  const auto& bank = net.fuzzy;
  if (input.size() != bank.channels()) {
    throw InputError("input has " + std::to_string(input.size()) + " channels, network expects " +
                     std::to_string(bank.channels()));
  }
  LayerMatrix p(bank.channels(), bank.layer_count());
  for (std::size_t c = 0; c < bank.channels(); ++c) {
    if (!std::isfinite(input[c])) throw InputError("non-finite network input");
    for (std::size_t j = 0; j < bank.layer_count(); ++j) {
      const double d = input[c] - bank.means(c, j);
      const double s = bank.sigmas(c, j);
      p(c, j) = std::exp(-(d * d) / (2.0 * s * s));
    }
  }
  return p;
}

ForwardResult forward(const BfbelNetwork& net, std::span<const double> input) {
  ForwardResult r;
  r.p = membership(net, input);
  const std::size_t channels = net.channels();
  r.a.assign(channels, 0.0);
  r.o.assign(channels, 0.0);
  r.u.assign(channels, 0.0);
  for (std::size_t c = 0; c < channels; ++c) {
    double a = 0.0;
    double o = 0.0;
    for (std::size_t j = 0; j < r.p.layers; ++j) {
      a += r.p(c, j) * net.v(c, j);
      o += r.p(c, j) * net.w(c, j);
    }
    r.a[c] = a;
    r.o[c] = o;
    r.u[c] = a - o;
  }
  return r;
}

ForwardResult forward(const BfbelNetwork& net, double input) { return forward(net, std::span<const double>(&input, 1)); }

double reward(const BfbelNetwork& net, double error, double u) { return net.gains.q_gain * error + net.gains.c_gain * u; }

double one_step_error(double i_curr, double i_next, double u) { return (i_curr + u) - i_next; }

BfbelNetwork adapt(const BfbelNetwork& net, const ForwardResult& fwd, std::span<const double> rewards) {
  if (!fwd.p.same_shape(net.v) || rewards.size() != net.channels()) {
    throw InputError("forward result does not match network shape");
  }
  BfbelNetwork next = net;
  const double alpha = net.gains.alpha;
  const double beta = net.gains.beta;
  for (std::size_t c = 0; c < net.channels(); ++c) {
    const double r = rewards[c];
    for (std::size_t j = 0; j < fwd.p.layers; ++j) {
      const double p = fwd.p(c, j);
      next.v(c, j) = net.v(c, j) + alpha * (p * (r - fwd.a[c]));
      next.w(c, j) = net.w(c, j) + beta * (p * (fwd.u[c] - r));
    }
  }
  return next;
}

BfbelNetwork adapt(const BfbelNetwork& net, const ForwardResult& fwd, double reward_signal) {
  return adapt(net, fwd, std::span<const double>(&reward_signal, 1));
}

TrainResult train_on_window(const BfbelNetwork& net, std::span<const double> window) {
  if (net.channels() != 1) throw InputError("train_on_window expects a single-channel network");
  if (window.size() < 2) throw InputError("training window needs at least 2 samples");

  TrainResult out{net, {}, {}};
  out.u_history.reserve(window.size() - 1);
  out.errors.reserve(window.size() - 1);
  for (std::size_t k = 0; k + 1 < window.size(); ++k) {
    const ForwardResult fwd = forward(out.network, window[k]);
    const double u = fwd.u[0];
    const double err = one_step_error(window[k], window[k + 1], u);
    const double r = reward(out.network, err, u);
    out.network = adapt(out.network, fwd, r);
    out.u_history.push_back(u);
    out.errors.push_back(err);
  }
  return out;
}

}  // namespace bfbelp
