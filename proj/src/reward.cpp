#include "dwarl/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace dwarl {

ZoneAssessment classify_zone(const Vec2& p_rob, const Vec2& p_obs, const Vec2& v_obs,
                             const RewardConfig& cfg) {
  ZoneAssessment a;
  a.d = dist(p_rob, p_obs);
  const double speed = v_obs.norm();
  if (speed < 1e-6) return a;  // static, no zone
  a.b = (p_rob - p_obs).dot(v_obs) / speed;
  if (a.d < cfg.steer_radius) {
    if (a.b > 0.0) {
      a.zone = Zone::red;
    } else if (a.b < 0.0) {
      a.zone = Zone::green;
    }
  }
  return a;
}

double steering_reward(const std::vector<ZoneAssessment>& assessments, const RewardConfig& cfg) {
  double r = 0.0;
  for (const ZoneAssessment& a : assessments) {
    if (a.zone == Zone::red) {
      r += -std::abs(a.b) * cfg.r_spatial - cfg.r_proximity / std::max(a.d, 1e-9);
    } else if (a.zone == Zone::green && cfg.positive_reinforcement) {
      r += std::abs(a.b) * cfg.r_spatial;
    }
  }
  return r;
}

RewardBreakdown step_reward(const Pose& prev_pose, const Pose& new_pose, const Vec2& goal,
                            const std::vector<ZoneAssessment>& assessments, bool collision,
                            const RewardConfig& cfg) {
  RewardBreakdown r;
  const double d_new = dist(new_pose.position(), goal);
  const double d_prev = dist(prev_pose.position(), goal);
  if (d_new < cfg.goal_radius) {
    r.goal = cfg.r_goal;
  } else {
    r.goal = -cfg.progress_gain * (d_new - d_prev);  // positive when closing on the goal
  }
  if (collision) r.collision = cfg.r_collision;
  r.steer = steering_reward(assessments, cfg);
  for (const ZoneAssessment& a : assessments) {
    if (a.d <= cfg.sensor_range) r.danger -= cfg.r_dcollision / std::max(a.d, 1e-9);
  }
  r.total = r.goal + r.collision + r.steer + r.danger;
  return r;
}

double distance_rate(const Vec2& p_rob, const Vec2& v_rob, const Vec2& p_obs, const Vec2& v_obs) {
  const Vec2 dp = p_rob - p_obs;
  const double d = dp.norm();
  if (d <= 0.0) throw std::invalid_argument("distance_rate: coincident positions");
  const Vec2 dv = v_rob - v_obs;
  return dp.dot(dv) / d;
}

}  // namespace dwarl
