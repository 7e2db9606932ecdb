#include "dwarl/observation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dwarl {

double obstacle_cost(double distance, double robot_radius, double collision_cost) {
  if (distance < 0.0) throw std::invalid_argument("obstacle_cost: distance < 0");
  if (!std::isfinite(distance)) return 0.0;  // nothing sensed, no penalty
  if (distance < robot_radius) return collision_cost;
  return 1.0 / distance;
}

double goal_cost(const Vec2& endpoint, const Vec2& goal, double goal_gain) {
  return dist(endpoint, goal) * goal_gain;
}

CostMatrices build_matrices(const std::vector<VelocityPair>& feasible,
                            const ObstacleHistory& history, const Pose& pose, const Vec2& goal,
                            const RobotLimits& limits, const ObservationConfig& cfg,
                            const std::vector<Pose>* pose_history) {
  const int rows = cfg.k * cfg.k;
  const int n = cfg.n;
  if (static_cast<int>(feasible.size()) != rows)
    throw std::invalid_argument("build_matrices: |feasible| != k^2");
  if (history.size() != n) throw std::invalid_argument("build_matrices: history length != n");
  if (pose_history && static_cast<int>(pose_history->size()) != n)
    throw std::invalid_argument("build_matrices: pose history length != n");

  CostMatrices m;
  m.lin.resize(rows, n);
  m.ang.resize(rows, n);
  m.oc.resize(rows, n);
  m.gc.resize(rows, n);
  m.tc.resize(rows);

  for (int i = 0; i < rows; ++i) {
    const VelocityPair& cmd = feasible[static_cast<std::size_t>(i)];
    const Pose end = arc_endpoint(pose, cmd, limits.dt);
    const double gc = goal_cost(end.position(), goal, cfg.goal_gain);
    const std::vector<Pose> arc = rollout_arc(pose, cmd, limits.dt, cfg.arc_samples);
    for (int j = 0; j < n; ++j) {
      double d;
      if (pose_history) {
        d = dist_to_obstacles((*pose_history)[static_cast<std::size_t>(j)], cmd,
                              history.column(j).points, limits, cfg.arc_samples);
      } else {
        d = min_dist_to_points(arc, history.column(j).points);
      }
      m.oc(i, j) = obstacle_cost(d, limits.robot_radius, cfg.collision_cost);
      m.lin(i, j) = cmd.v;
      m.ang(i, j) = cmd.w;
      m.gc(i, j) = gc;
    }
    m.tc(i) = m.oc(i, n - 1) + gc;
  }
  return m;
}

ObservationBlock sort_block(const CostMatrices& m) {
  const int rows = static_cast<int>(m.tc.size());
  const int n = static_cast<int>(m.oc.cols());
  std::vector<int> perm(static_cast<std::size_t>(rows));
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return m.tc(a) < m.tc(b); });

  ObservationBlock b;
  b.n = n;
  b.k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rows))));
  b.lin.resize(rows, n);
  b.ang.resize(rows, n);
  b.oc.resize(rows, n);
  b.gc.resize(rows, n);
  b.action_map.resize(static_cast<std::size_t>(rows));
  b.sort_perm = perm;
  for (int i = 0; i < rows; ++i) {
    const int src = perm[static_cast<std::size_t>(i)];
    b.lin.row(i) = m.lin.row(src);
    b.ang.row(i) = m.ang.row(src);
    b.oc.row(i) = m.oc.row(src);
    b.gc.row(i) = m.gc.row(src);
    b.action_map[static_cast<std::size_t>(i)] = {m.lin(src, 0), m.ang(src, 0)};
  }
  return b;
}

ObservationBlock make_observation(const VelocityPair& current, const ObstacleHistory& history,
                                  const Pose& pose, const Vec2& goal, const RobotLimits& limits,
                                  const ObservationConfig& cfg,
                                  const std::vector<Pose>* pose_history) {
  const VelocityWindow window = feasible_window(current, limits);
  const std::vector<VelocityPair> feasible = discretize_window(window, cfg.k);
  return sort_block(build_matrices(feasible, history, pose, goal, limits, cfg, pose_history));
}

std::string dump_block(const ObservationBlock& block) {
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof(buf), "observation k=%d n=%d rows=%d\n", block.k, block.n,
                static_cast<int>(block.action_map.size()));
  out += buf;
  out += "row v w oc... gc tc\n";
  const int n = block.n;
  for (int i = 0; i < static_cast<int>(block.action_map.size()); ++i) {
    std::snprintf(buf, sizeof(buf), "%d %.17g %.17g", i, block.action_map[i].v,
                  block.action_map[i].w);
    out += buf;
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), " %.17g", block.oc(i, j));
      out += buf;
    }
    const double tc = block.oc(i, n - 1) + block.gc(i, n - 1);
    std::snprintf(buf, sizeof(buf), " %.17g %.17g\n", block.gc(i, n - 1), tc);
    out += buf;
  }
  return out;
}

}  // namespace dwarl
