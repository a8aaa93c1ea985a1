#pragma once

// Kinematic drone model: per-axis PID on velocity error producing a bounded
// acceleration, integrated with explicit Euler.

#include <array>

#include "bfbelp/rng.hpp"
#include "bfbelp/swarm.hpp"
#include "bfbelp/types.hpp"

namespace bfbelp {

struct PidGains {
  double kp = 1.5;
  double ki = 0.05;
  double kd = 0.3;

  void validate() const;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  friend bool operator==(const PidState&, const PidState&) = default;
};

struct VehicleLimits {
  double v_max = 3.0;  ///< per-axis speed limit, m/s
  double a_max = 6.0;  ///< per-axis acceleration limit, m/s^2

  /// Anti-windup bound on the integral accumulator.
  double integral_clamp(const PidGains& g) const;
};

struct DroneState {
  int id = 0;
  Vec3 position;
  Vec3 velocity;
  std::array<PidState, 3> pid{};
  friend bool operator==(const DroneState&, const DroneState&) = default;
};

struct PidOutput {
  double control = 0.0;
  PidState state;
};

PidOutput pid_step(const PidGains& gains, const PidState& state, double error, double dt,
                   double integral_clamp = INFINITY);

DroneState integrate_drone(const DroneState& state, const CommandVector& cmd, double dt, const PidGains& gains,
                           const VehicleLimits& limits);

/// Uniform in nominal * [1 - jitter_frac, 1 + jitter_frac].
double jittered_dt(Rng& rng, double nominal, double jitter_frac);

}  // namespace bfbelp
