#include "dwarl/dwa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace dwarl {

double heading_score(const Pose& pose, const VelocityPair& cmd, const Vec2& goal, double dt) {
  Pose end = arc_endpoint(pose, cmd, dt);
  double bearing = std::atan2(goal.y - end.y, goal.x - end.x);
  double err = wrap_angle(bearing - end.theta);
  return 1.0 - std::abs(err) / M_PI;
}

VelocityPair dwa_plan(const Pose& pose, const VelocityPair& current,
                      const std::vector<Vec2>& scan_points, const Vec2& goal,
                      const RobotLimits& limits, const DWAConfig& cfg) {
  if (cfg.k < 2) throw std::invalid_argument("dwa_plan: k must be >= 2");
  VelocityWindow window = feasible_window(current, limits);
  std::vector<VelocityPair> candidates = discretize_window(window, cfg.k);

  // Hardest stop the window allows. Jumping straight to (0, 0) would exceed
  // the deceleration limits whenever the robot is already moving.
  VelocityPair stop{std::clamp(0.0, window.lin.lo, window.lin.hi),
                    std::clamp(0.0, window.ang.lo, window.ang.hi)};

  bool found = false;
  VelocityPair best = stop;
  double best_score = 0.0;
  double best_abs_w = 0.0;
  for (const VelocityPair& cand : candidates) {
    double raw = dist_to_obstacles(pose, cand, scan_points, limits, cfg.arc_samples);
    double clearance = std::max(0.0, raw - cfg.safety_margin);
    if (!admissible(cand, clearance, limits)) continue;
    double h = heading_score(pose, cand, goal, limits.dt);
    double capped = std::min(clearance, cfg.clearance_cap) / cfg.clearance_cap;
    double vel = cand.v / limits.v_max;
    double score = cfg.sigma_gain * (cfg.alpha * h + cfg.beta * capped + cfg.gamma * vel);
    double abs_w = std::abs(cand.w);
    bool better = !found || score > best_score ||
                  (score == best_score && abs_w < best_abs_w);
    if (better) {
      found = true;
      best = cand;
      best_score = score;
      best_abs_w = abs_w;
    }
  }
  return best;
}

}  // namespace dwarl
