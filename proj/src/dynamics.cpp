#include "dwarl/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dwarl {

void RobotLimits::validate() const {
  if (v_min > v_max) throw std::invalid_argument("limits: v_min > v_max");
  if (w_min >= w_max) throw std::invalid_argument("limits: w_min >= w_max");
  if (lin_accel <= 0.0) throw std::invalid_argument("limits: lin_accel <= 0");
  if (ang_accel <= 0.0) throw std::invalid_argument("limits: ang_accel <= 0");
  if (robot_radius <= 0.0) throw std::invalid_argument("limits: robot_radius <= 0");
  if (dt <= 0.0) throw std::invalid_argument("limits: dt <= 0");
}

namespace {

Pose propagate(const Pose& p, const VelocityPair& cmd, double t) {
  Pose out;
  if (std::abs(cmd.w) < 1e-12) {
    out.x = p.x + cmd.v * t * std::cos(p.theta);
    out.y = p.y + cmd.v * t * std::sin(p.theta);
    out.theta = wrap_angle(p.theta + cmd.w * t);
  } else {
    const double r = cmd.v / cmd.w;  // signed arc radius
    const double th1 = p.theta + cmd.w * t;
    out.x = p.x + r * (std::sin(th1) - std::sin(p.theta));
    out.y = p.y - r * (std::cos(th1) - std::cos(p.theta));
    out.theta = wrap_angle(th1);
  }
  return out;
}

}  // namespace

std::vector<Pose> rollout_arc(const Pose& pose, const VelocityPair& cmd, double duration,
                              int samples) {
  if (duration <= 0.0) throw std::invalid_argument("rollout_arc: duration <= 0");
  if (samples < 2) throw std::invalid_argument("rollout_arc: samples < 2");
  std::vector<Pose> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double t = duration * static_cast<double>(i) / static_cast<double>(samples - 1);
    out.push_back(propagate(pose, cmd, t));
  }
  return out;
}

Pose arc_endpoint(const Pose& pose, const VelocityPair& cmd, double duration) {
  return propagate(pose, cmd, duration);
}

VelocityWindow feasible_window(const VelocityPair& current, const RobotLimits& limits) {
  VelocityWindow w;
  w.lin.lo = std::max(current.v - limits.lin_accel * limits.dt, limits.v_min);
  w.lin.hi = std::min(current.v + limits.lin_accel * limits.dt, limits.v_max);
  w.ang.lo = std::max(current.w - limits.ang_accel * limits.dt, limits.w_min);
  w.ang.hi = std::min(current.w + limits.ang_accel * limits.dt, limits.w_max);
  return w;
}

std::vector<VelocityPair> discretize_window(const VelocityWindow& window, int k) {
  if (k < 2) throw std::invalid_argument("discretize_window: k < 2");
  std::vector<VelocityPair> pairs;
  pairs.reserve(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    const double v =
        window.lin.lo + window.lin.width() * static_cast<double>(i) / static_cast<double>(k - 1);
    for (int j = 0; j < k; ++j) {
      const double w =
          window.ang.lo + window.ang.width() * static_cast<double>(j) / static_cast<double>(k - 1);
      pairs.push_back({v, w});
    }
  }
  return pairs;
}

double dist_to_obstacles(const Pose& pose, const VelocityPair& cmd,
                         const std::vector<Vec2>& points, const RobotLimits& limits,
                         int samples) {
  if (points.empty()) return std::numeric_limits<double>::infinity();
  return min_dist_to_points(rollout_arc(pose, cmd, limits.dt, samples), points);
}

double min_dist_to_points(const std::vector<Pose>& trajectory, const std::vector<Vec2>& points) {
  if (trajectory.empty() || points.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const Pose& s : trajectory) {
    for (const Vec2& p : points) {
      const double dx = p.x - s.x;
      const double dy = p.y - s.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) best = d2;
    }
  }
  return std::sqrt(best);
}

bool admissible(const VelocityPair& cmd, double distance, const RobotLimits& limits) {
  if (distance < 0.0) throw std::invalid_argument("admissible: distance < 0");
  if (!std::isfinite(distance)) return true;
  const double v_bound = std::sqrt(2.0 * distance * limits.lin_accel);
  const double w_bound = std::sqrt(2.0 * distance * limits.ang_accel);
  const bool lin_ok = cmd.v <= 0.0 || cmd.v <= v_bound;
  return lin_ok && std::abs(cmd.w) <= w_bound;
}

}  // namespace dwarl
