#pragma once

// Reynolds flocking commands, APF obstacle repulsion and command composition.

#include <cstddef>
#include <span>
#include <vector>

#include "bfbelp/types.hpp"

namespace bfbelp {

enum class AlignmentMode {
  kTargetDrive,    ///< (target - body) * R_A
  kVelocityMatch,  ///< classical boids: (mean neighbour velocity - own velocity) * R_A
};

struct FlockingGains {
  double r_c = 0.3;  ///< cohesion rate, 1/s
  double r_s = 1.2;  ///< separation rate, 1/s
  double r_a = 0.5;  ///< alignment (target drive) rate, 1/s
  double visual_range = 10.0;
  double separation_radius = 3.0;
  double min_separation = 1.5;
  AlignmentMode alignment = AlignmentMode::kTargetDrive;

  void validate() const;
};

struct Obstacle {
  Vec3 center;
  double eta = 50.0;
  double rho0 = 8.0;
  double hard_radius = 1.0;
};

struct ObstacleField {
  std::vector<Obstacle> obstacles;
  void validate() const;
};

struct CommandVector {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;

  Vec3 as_vec() const { return {dx, dy, dz}; }
  static CommandVector from(const Vec3& v) { return {v.x, v.y, v.z}; }
  friend bool operator==(const CommandVector&, const CommandVector&) = default;
};

struct CommandLimits {
  double v_max = 3.0;  ///< per-axis, m/s
};

/// Position and velocity of one swarm member as seen by the flight computer.
struct AgentKinematics {
  int id = 0;
  Vec3 position;
  Vec3 velocity;
};

/// Centroid of self plus every neighbour within visual_range.
Vec3 swarm_body(const AgentKinematics& self, std::span<const AgentKinematics> neighbors, double visual_range);

CommandVector flocking_delta(const AgentKinematics& self, std::span<const AgentKinematics> neighbors,
                             const Vec3& body, const Vec3& target, const FlockingGains& gains);

/// 0.5 eta (1/rho - 1/rho0)^2 inside rho0, 0 outside; rho is horizontal.
double repulsive_potential(const Vec3& pos, const Obstacle& obstacle);

/// Negative horizontal gradient of the summed potentials.
CommandVector repulsive_velocity(const Vec3& pos, const ObstacleField& field);

/// Componentwise sum clamped to [-v_max, v_max].
CommandVector compose_command(const CommandVector& flock, const CommandVector& repulse, const CommandLimits& limits);

/// Connected components of the "within visual_range" graph, as lists of
/// agent ids. Components are ordered by their smallest id.
std::vector<std::vector<int>> detect_subswarms(std::span<const AgentKinematics> states, double visual_range);

}  // namespace bfbelp
