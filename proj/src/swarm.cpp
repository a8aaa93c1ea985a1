#include "bfbelp/swarm.hpp"

#include <algorithm>
#include <cmath>

namespace bfbelp {

void FlockingGains::validate() const {
  if (!(r_c >= 0.0 && r_s >= 0.0 && r_a >= 0.0)) throw ConfigError("flocking rates must be >= 0");
  if (!(visual_range > 0.0)) throw ConfigError("flocking.visual_range must be > 0");
  if (!(separation_radius >= 0.0 && separation_radius <= visual_range)) {
    throw ConfigError("flocking.separation_radius must lie in [0, visual_range]");
  }
}

void ObstacleField::validate() const {
  for (const auto& o : obstacles) {
    if (!(o.eta > 0.0)) throw ConfigError("obstacle eta must be > 0");
    if (!(o.hard_radius > 0.0 && o.rho0 > o.hard_radius)) {
      throw ConfigError("obstacle radii must satisfy rho0 > hard_radius > 0");
    }
  }
}

Vec3 swarm_body(const AgentKinematics& self, std::span<const AgentKinematics> neighbors, double visual_range) {
  Vec3 sum = self.position;
  std::size_t n = 1;
  for (const auto& o : neighbors) {
    if (o.id == self.id) continue;
    if (distance(o.position, self.position) <= visual_range) {
      sum += o.position;
      ++n;
    }
  }
  return sum * (1.0 / static_cast<double>(n));
}

CommandVector flocking_delta(const AgentKinematics& self, std::span<const AgentKinematics> neighbors,
                             const Vec3& body, const Vec3& target, const FlockingGains& gains) {
  Vec3 delta = (body - self.position) * gains.r_c;

  for (const auto& o : neighbors) {
    if (o.id == self.id) continue;
    if (distance(self.position, o.position) < gains.separation_radius) delta += (self.position - o.position) * gains.r_s;
  }

  if (gains.alignment == AlignmentMode::kTargetDrive) {
    delta += (target - body) * gains.r_a;
  } else {
    Vec3 mean_v;
    std::size_t n = 0;
    for (const auto& o : neighbors) {
      if (o.id == self.id || distance(o.position, self.position) > gains.visual_range) continue;
      mean_v += o.velocity;
      ++n;
    }
    if (n > 0) delta += (mean_v * (1.0 / static_cast<double>(n)) - self.velocity) * gains.r_a;
  }
  return CommandVector::from(delta);
}

double repulsive_potential(const Vec3& pos, const Obstacle& obstacle) {
  const double rho = horizontal_distance(pos, obstacle.center);
  if (rho == 0.0) throw SingularityError("position coincides with obstacle center");
  if (rho > obstacle.rho0) return 0.0;
  const double g = 1.0 / rho - 1.0 / obstacle.rho0;
  return 0.5 * obstacle.eta * g * g;
}

CommandVector repulsive_velocity(const Vec3& pos, const ObstacleField& field) {
  CommandVector out;
  for (const auto& o : field.obstacles) {
    const double ex = pos.x - o.center.x;
    const double ey = pos.y - o.center.y;
    const double rho = std::hypot(ex, ey);
    if (rho == 0.0) throw SingularityError("position coincides with obstacle center");
    if (rho > o.rho0) continue;
    const double mag = o.eta * (1.0 / rho - 1.0 / o.rho0) / (rho * rho);
    out.dx += mag * ex / rho;
    out.dy += mag * ey / rho;
  }
  return out;
}

CommandVector compose_command(const CommandVector& flock, const CommandVector& repulse, const CommandLimits& limits) {
  const double v = limits.v_max;
  return {std::clamp(flock.dx + repulse.dx, -v, v), std::clamp(flock.dy + repulse.dy, -v, v),
          std::clamp(flock.dz + repulse.dz, -v, v)};
}

std::vector<std::vector<int>> detect_subswarms(std::span<const AgentKinematics> states, double visual_range) {
  const std::size_t n = states.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance(states[i].position, states[j].position) <= visual_range) parent[find(i)] = find(j);
    }
  }

  std::vector<std::vector<int>> groups;
  std::vector<std::size_t> root_of_group;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    auto it = std::find(root_of_group.begin(), root_of_group.end(), r);
    if (it == root_of_group.end()) {
      root_of_group.push_back(r);
      groups.push_back({states[i].id});
    } else {
      groups[static_cast<std::size_t>(it - root_of_group.begin())].push_back(states[i].id);
    }
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return groups;
}

}  // namespace bfbelp
