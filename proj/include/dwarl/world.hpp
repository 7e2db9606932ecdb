#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "dwarl/dynamics.hpp"
#include "dwarl/geometry.hpp"

namespace dwarl {

// Static disc, wall segment, or a disc that walks a waypoint polyline.
struct Obstacle {
  enum class Kind { disc, segment };

  Kind kind = Kind::disc;
  Vec2 center{};        // disc position; advances for walkers
  double radius = 0.1;  // disc only
  Vec2 seg_a{}, seg_b{};

  // walker motion; empty waypoints means static
  std::vector<Vec2> waypoints;
  double speed = 0.0;
  bool loop = false;  // true: cycle waypoints, false: ping-pong

  bool is_walker() const { return kind == Kind::disc && !waypoints.empty() && speed > 0.0; }
  // Reference point used for distance checks: the center for discs, the
  // closest boundary point for segments.
  Vec2 reference_point(const Vec2& from) const;

  // walker runtime state
  int target_index = 0;
  int direction = 1;  // ping-pong only
};

// One lidar sweep: obstacle points in the fixed odometry frame.
struct ScanResult {
  long timestamp = 0;  // step index
  std::vector<Vec2> points;
};

/// Ring buffer of the last n scans, oldest first. Before n real scans exist,
/// the missing rows duplicate the oldest real scan.
class ObstacleHistory {
 public:
  explicit ObstacleHistory(int n);

  /// Appends a scan, evicting the oldest. A fresh history copies the first
  /// scan into every row. Rejects timestamps not newer than the newest entry.
  void push(ScanResult scan);

  int size() const { return static_cast<int>(scans_.size()); }
  int capacity() const { return n_; }
  bool warmed_up() const { return !scans_.empty(); }
  /// j = 0 is the oldest column, j = size()-1 the newest.
  const ScanResult& column(int j) const { return scans_.at(static_cast<std::size_t>(j)); }
  const ScanResult& newest() const { return scans_.back(); }
  void clear() { scans_.clear(); }

 private:
  int n_;
  std::deque<ScanResult> scans_;
};

struct SensorConfig {
  int beams = 180;
  double max_range = 4.0;
  double noise_sigma = 0.0;  // gaussian range noise, m
};

// Per-trial randomization applied at reset.
struct RandomizationConfig {
  double obstacle_jitter = 1.0;  // uniform +-jitter on disc/walker positions, m
  bool walker_phase = true;      // random initial progress along the polyline
  double goal_jitter = 0.0;      // uniform +-jitter on the goal, m
};

struct ArenaBounds {
  Vec2 min{0.0, 0.0};
  Vec2 max{10.0, 10.0};

  bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
};

// A named scenario: geometry, actors, start/goal, and randomization ranges.
// A seed fully determines a trial.
struct ScenarioConfig {
  std::string name = "unnamed";
  ArenaBounds arena;
  Pose start;
  Vec2 goal;
  std::vector<Obstacle> obstacles;
  SensorConfig sensor;
  RandomizationConfig randomization;
  RobotLimits limits;
  int max_steps = 500;
  double goal_radius = 0.3;       // m
  double collision_radius = 0.5;  // m

  void validate() const;
};

/// Parses a scenario file (JSON, schema documented in the README).
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text);

enum class ObstacleVelocityMode { finite_difference, ground_truth };

// Position and velocity of one obstacle as exposed to the reward, plus
// whether it is within sensor range.
struct ObstacleTrack {
  Vec2 position;
  Vec2 velocity;
  double distance;  // to the robot
};

/// Deterministic 2-D scenario simulator. One instance is single-flow;
/// independent instances may run concurrently.
class World {
 public:
  explicit World(ScenarioConfig config);

  /// Re-seeds and rebuilds the trial: applies obstacle jitter, walker phases
  /// and goal jitter drawn from `seed`, then resets the robot to the start.
  void reset(std::uint64_t seed);

  /// Advances walkers by speed*dt along their polylines, then the robot along
  /// the commanded arc, then recomputes collision/goal flags.
  void step(const VelocityPair& cmd);

  /// Ray-casts evenly spaced beams and returns hit points in the odometry
  /// frame. Hits beyond max range are dropped.
  ScanResult sense() const;

  const Pose& robot() const { return robot_; }
  const VelocityPair& velocity() const { return velocity_; }
  const Vec2& goal() const { return goal_; }
  long step_index() const { return step_index_; }
  bool collided() const { return collided_; }
  bool reached_goal() const { return reached_goal_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  const ScenarioConfig& config() const { return config_; }

  /// Obstacles within sensor range with their velocities, either ground truth
  /// or a finite difference of positions across consecutive steps (gated at
  /// 0.5 m to drop teleports).
  std::vector<ObstacleTrack> obstacle_tracks(ObstacleVelocityMode mode) const;

 private:
  void update_flags();

  ScenarioConfig config_;
  std::vector<Obstacle> obstacles_;
  std::vector<Vec2> prev_positions_;
  std::vector<bool> has_prev_;
  Pose robot_;
  VelocityPair velocity_;
  Vec2 goal_;
  long step_index_ = 0;
  bool collided_ = false;
  bool reached_goal_ = false;
  mutable std::mt19937_64 sensor_rng_;
};

}  // namespace dwarl
