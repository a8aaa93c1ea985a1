#include "bfbelp/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace bfbelp {

void PidGains::validate() const {
  for (double g : {kp, ki, kd}) {
    if (!(std::isfinite(g) && g >= 0.0)) throw ConfigError("pid gains must be finite and >= 0");
  }
}

double VehicleLimits::integral_clamp(const PidGains& g) const { return 10.0 * v_max / std::max(g.ki, 1e-9); }

PidOutput pid_step(const PidGains& gains, const PidState& state, double error, double dt, double integral_clamp) {
  if (!(dt > 0.0)) throw InputError("pid_step needs dt > 0");
  PidOutput out;
  out.state.integral = std::clamp(state.integral + error * dt, -integral_clamp, integral_clamp);
  out.state.prev_error = error;
  out.control = gains.kp * error + gains.ki * out.state.integral + gains.kd * (error - state.prev_error) / dt;
  return out;
}

DroneState integrate_drone(const DroneState& state, const CommandVector& cmd, double dt, const PidGains& gains,
                           const VehicleLimits& limits) {
  if (!(dt > 0.0)) throw InputError("integrate_drone needs dt > 0");
  DroneState next = state;
  const Vec3 target_v = cmd.as_vec();
  const double clamp = limits.integral_clamp(gains);
  for (std::size_t a = 0; a < kAxes; ++a) {
    const double e = target_v[a] - state.velocity[a];
    const PidOutput pid = pid_step(gains, state.pid[a], e, dt, clamp);
    const double accel = std::clamp(pid.control, -limits.a_max, limits.a_max);
    next.pid[a] = pid.state;
    next.velocity[a] = std::clamp(state.velocity[a] + accel * dt, -limits.v_max, limits.v_max);
    next.position[a] = state.position[a] + next.velocity[a] * dt;
  }
  return next;
}

double jittered_dt(Rng& rng, double nominal, double jitter_frac) {
  if (!(jitter_frac >= 0.0 && jitter_frac < 1.0)) throw ConfigError("jitter_frac must lie in [0, 1)");
  if (jitter_frac == 0.0) return nominal;
  return nominal * (1.0 + rng.uniform(-jitter_frac, jitter_frac));
}

}  // namespace bfbelp
