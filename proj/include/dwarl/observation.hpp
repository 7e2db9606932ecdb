#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dwarl/dynamics.hpp"
#include "dwarl/world.hpp"

namespace dwarl {

struct ObservationConfig {
  int k = 10;  // velocities per axis; action space is k*k
  int n = 10;  // history depth
  double collision_cost = 40.0;   // obstacle cost inside the robot radius
  double goal_gain = 2.5;         // goal alignment cost scale
  int arc_samples = 10;           // rollout resolution for obstacle distances
  bool past_robot_poses = false;  // score history columns against past poses
};

// Per-command cost matrices, one column per history instant (oldest first).
// Velocity and goal columns are constant across time; tc is taken at the
// newest column.
struct CostMatrices {
  Eigen::MatrixXd lin;  // k^2 x n
  Eigen::MatrixXd ang;  // k^2 x n
  Eigen::MatrixXd oc;   // k^2 x n
  Eigen::MatrixXd gc;   // k^2 x n
  Eigen::VectorXd tc;   // k^2
};

// The four matrices with rows permuted by ascending total cost, plus the
// index -> command map the policy's action index selects from. Row 0 is the
// cheapest command at the current instant.
struct ObservationBlock {
  Eigen::MatrixXd lin;
  Eigen::MatrixXd ang;
  Eigen::MatrixXd oc;
  Eigen::MatrixXd gc;
  std::vector<VelocityPair> action_map;
  std::vector<int> sort_perm;  // sort_perm[i] = pre-sort row now at i
  int k = 0;
  int n = 0;
};

/// Cost of the nearest approach `distance`: collision_cost inside the robot
/// radius, 1/distance otherwise, 0 when nothing was sensed (infinite
/// distance).
double obstacle_cost(double distance, double robot_radius, double collision_cost = 40.0);

/// Euclidean distance from the trajectory endpoint to the goal, scaled.
double goal_cost(const Vec2& endpoint, const Vec2& goal, double goal_gain = 2.5);

/// Scores every feasible command against each history column (past obstacle
/// positions, current robot pose) and the goal. feasible.size() must be k^2
/// and the history must be warmed up to length n.
CostMatrices build_matrices(const std::vector<VelocityPair>& feasible,
                            const ObstacleHistory& history, const Pose& pose, const Vec2& goal,
                            const RobotLimits& limits, const ObservationConfig& cfg,
                            const std::vector<Pose>* pose_history = nullptr);

/// Reorders rows by ascending total cost (stable in the pre-sort index) and
/// applies the same permutation to every channel.
ObservationBlock sort_block(const CostMatrices& m);

/// Convenience: window -> discretize -> cost matrices -> sorted block.
ObservationBlock make_observation(const VelocityPair& current, const ObstacleHistory& history,
                                  const Pose& pose, const Vec2& goal, const RobotLimits& limits,
                                  const ObservationConfig& cfg,
                                  const std::vector<Pose>* pose_history = nullptr);

/// Structured text dump for golden-file comparisons and offline inspection.
std::string dump_block(const ObservationBlock& block);

}  // namespace dwarl
