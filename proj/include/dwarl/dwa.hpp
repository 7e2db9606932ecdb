#pragma once

#include <vector>

#include "dwarl/dynamics.hpp"
#include "dwarl/geometry.hpp"

namespace dwarl {

struct DWAConfig {
  double alpha = 0.8;  // heading weight
  double beta = 0.1;   // clearance weight
  double gamma = 0.1;  // velocity weight
  double sigma_gain = 1.0;  // post-sum scaling, identity by default
  double clearance_cap = 2.0;  // m, clearance saturates here
  // Scan ranges measure to obstacle surfaces, but the simulator flags a
  // collision within collision_radius of an obstacle. Braking distances are
  // therefore taken against the inflated boundary: d_eff = max(0, d - margin).
  double safety_margin = 0.5;  // m
  int k = 10;
  int arc_samples = 10;
};

/// Alignment of the trajectory endpoint with the goal bearing, in [0, 1].
/// 1 means the endpoint heading points straight at the goal.
double heading_score(const Pose& pose, const VelocityPair& cmd, const Vec2& goal, double dt);

/// Classic dynamic-window planner: argmax of the weighted objective over the
/// admissible subset of the discretized window. Ties break toward lower |w|,
/// then lower index. When no command is admissible, brakes as hard as the
/// window allows ((0, 0) once the robot is slow enough for a full stop).
VelocityPair dwa_plan(const Pose& pose, const VelocityPair& current,
                      const std::vector<Vec2>& scan_points, const Vec2& goal,
                      const RobotLimits& limits, const DWAConfig& cfg);

}  // namespace dwarl
