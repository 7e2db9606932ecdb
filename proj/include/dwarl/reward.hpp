#pragma once

#include <vector>

#include "dwarl/geometry.hpp"

namespace dwarl {

struct RewardConfig {
  double r_goal = 2000.0;
  double r_collision = -2000.0;
  double r_proximity = 10.0;
  double r_spatial = 25.0;
  double r_dcollision = 30.0;
  double progress_gain = 2.5;
  double goal_radius = 0.3;       // m
  double collision_radius = 0.5;  // m
  double steer_radius = 2.0;      // steering reward activation range, m
  double sensor_range = 4.0;      // proximity penalty range, m
  bool positive_reinforcement = true;  // reward the low-risk zone (ablation switch)
};

enum class Zone { red, green, none };

// One obstacle as seen by the steering reward: distance, signed offset along
// the obstacle's heading (positive = ahead of it), and the risk zone.
struct ZoneAssessment {
  double d = 0.0;  // robot-obstacle distance
  double b = 0.0;  // along-heading offset of the robot
  Zone zone = Zone::none;
};

struct RewardBreakdown {
  double goal = 0.0;
  double collision = 0.0;
  double steer = 0.0;
  double danger = 0.0;
  double total = 0.0;
};

/// Projects the robot onto the obstacle's heading axis. Ahead of a moving
/// obstacle and inside the activation radius is the high-risk zone, behind it
/// the low-risk zone. Static obstacles (speed < 1e-6) get no zone.
ZoneAssessment classify_zone(const Vec2& p_rob, const Vec2& p_obs, const Vec2& v_obs,
                             const RewardConfig& cfg);

/// Sum of the per-obstacle steering terms: penalized in the high-risk zone,
/// rewarded in the low-risk zone (unless positive reinforcement is disabled).
double steering_reward(const std::vector<ZoneAssessment>& assessments, const RewardConfig& cfg);

/// Full shaped step reward: goal progress or arrival bonus, collision
/// penalty, steering term, and the inverse-distance proximity penalty over
/// everything in sensor range.
RewardBreakdown step_reward(const Pose& prev_pose, const Pose& new_pose, const Vec2& goal,
                            const std::vector<ZoneAssessment>& assessments, bool collision,
                            const RewardConfig& cfg);

/// Analytic time derivative of the robot-obstacle distance,
/// (1/D) * dot(p_rob - p_obs, v_rob - v_obs). Negative means closing.
double distance_rate(const Vec2& p_rob, const Vec2& v_rob, const Vec2& p_obs, const Vec2& v_obs);

}  // namespace dwarl
