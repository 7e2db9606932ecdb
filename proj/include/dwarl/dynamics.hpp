#pragma once

#include <vector>

#include "dwarl/geometry.hpp"

namespace dwarl {

// Kinematic and actuation limits of a differential-drive robot, plus the
// control period. Acceleration limits double as braking limits in the
// admissibility check.
struct RobotLimits {
  double v_min = 0.0;    // m/s (robot does not reverse by default)
  double v_max = 0.65;   // m/s
  double w_min = -3.14;  // rad/s
  double w_max = 3.14;   // rad/s
  double lin_accel = 0.5;  // m/s^2
  double ang_accel = 2.0;  // rad/s^2
  double robot_radius = 0.2;  // m
  double dt = 0.2;            // control period, s

  void validate() const;
};

// One (v, w) command.
struct VelocityPair {
  double v = 0.0;
  double w = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  double width() const { return hi - lo; }
};

// Velocities reachable within one control period, clipped to the absolute caps.
struct VelocityWindow {
  Interval lin;
  Interval ang;

  bool contains(const VelocityPair& c, double tol = 0.0) const {
    return lin.contains(c.v, tol) && ang.contains(c.w, tol);
  }
};

/// Constant-curvature rollout from `pose` under `cmd` for `duration` seconds.
/// Returns `samples` poses evenly spaced in time, first at t=0, last at
/// t=duration. Straight-line limit is used for w ~ 0.
std::vector<Pose> rollout_arc(const Pose& pose, const VelocityPair& cmd, double duration,
                              int samples);

/// Pose reached after driving `cmd` for `duration` seconds.
Pose arc_endpoint(const Pose& pose, const VelocityPair& cmd, double duration);

/// Velocities reachable from `current` within one control period, intersected
/// with the absolute caps.
VelocityWindow feasible_window(const VelocityPair& current, const RobotLimits& limits);

/// k evenly spaced values per axis (interval endpoints included), Cartesian
/// product in row-major order: linear outer, angular inner. Size k*k.
std::vector<VelocityPair> discretize_window(const VelocityWindow& window, int k);

/// Minimum distance from the arc traced by `cmd` over one control period to
/// any obstacle point. Infinity when `points` is empty.
double dist_to_obstacles(const Pose& pose, const VelocityPair& cmd,
                         const std::vector<Vec2>& points, const RobotLimits& limits,
                         int samples = 10);

/// Minimum distance between a sampled trajectory and a point set. Infinity
/// when either side is empty.
double min_dist_to_points(const std::vector<Pose>& trajectory, const std::vector<Vec2>& points);

/// Braking admissibility: the robot can stop before covering `distance`.
/// The angular bound is applied to |w|; the linear bound to forward motion.
bool admissible(const VelocityPair& cmd, double distance, const RobotLimits& limits);

}  // namespace dwarl
