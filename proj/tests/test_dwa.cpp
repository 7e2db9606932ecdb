#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dwarl/dwa.hpp"
#include "dwarl/dynamics.hpp"
#include "dwarl/geometry.hpp"

using namespace dwarl;

namespace {

RobotLimits turtle_limits() {
  RobotLimits l;
  l.v_min = 0.0;
  l.v_max = 0.65;
  l.w_min = -3.14;
  l.w_max = 3.14;
  l.lin_accel = 0.5;
  l.ang_accel = 2.0;
  l.dt = 0.2;
  return l;
}

// Reference planner: scores every candidate, collects the survivors, then
// picks the winner in a separate pass. Same contract as dwa_plan, different
// code path.
VelocityPair brute_force_plan(const Pose& pose, const VelocityPair& current,
                              const std::vector<Vec2>& pts, const Vec2& goal,
                              const RobotLimits& limits, const DWAConfig& cfg) {
  VelocityWindow window = feasible_window(current, limits);
  std::vector<VelocityPair> cands = discretize_window(window, cfg.k);
  struct Scored {
    VelocityPair cmd;
    double score;
    std::size_t index;
  };
  std::vector<Scored> survivors;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    double raw = dist_to_obstacles(pose, cands[i], pts, limits, cfg.arc_samples);
    double clearance = std::max(0.0, raw - cfg.safety_margin);
    if (!admissible(cands[i], clearance, limits)) continue;
    Pose end = arc_endpoint(pose, cands[i], limits.dt);
    double bearing = std::atan2(goal.y - end.y, goal.x - end.x);
    double err = wrap_angle(bearing - end.theta);
    double h = 1.0 - std::abs(err) / M_PI;
    double capped = std::min(clearance, cfg.clearance_cap) / cfg.clearance_cap;
    double vel = cands[i].v / limits.v_max;
    double score = cfg.sigma_gain * (cfg.alpha * h + cfg.beta * capped + cfg.gamma * vel);
    survivors.push_back({cands[i], score, i});
  }
  if (survivors.empty()) {
    return {std::clamp(0.0, window.lin.lo, window.lin.hi),
            std::clamp(0.0, window.ang.lo, window.ang.hi)};
  }
  const Scored* best = &survivors.front();
  for (const Scored& s : survivors) {
    if (s.score > best->score ||
        (s.score == best->score && std::abs(s.cmd.w) < std::abs(best->cmd.w)))
      best = &s;
  }
  return best->cmd;
}

}  // namespace

TEST_CASE("heading score spans aligned, perpendicular, and reversed goals") {
  Pose origin{0.0, 0.0, 0.0};
  VelocityPair rest{0.0, 0.0};
  CHECK(heading_score(origin, rest, Vec2{1.0, 0.0}, 0.2) == doctest::Approx(1.0));
  CHECK(heading_score(origin, rest, Vec2{0.0, 1.0}, 0.2) == doctest::Approx(0.5));
  CHECK(heading_score(origin, rest, Vec2{-1.0, 0.0}, 0.2) == doctest::Approx(0.0));
  // endpoint, not start, is what gets scored: a quarter turn in place faces
  // the goal on the left
  CHECK(heading_score(origin, VelocityPair{0.0, M_PI / 2.0}, Vec2{0.0, 1.0}, 1.0) ==
        doctest::Approx(1.0));
  // quarter arc of radius 1 ends at (1, 1) facing +y
  CHECK(heading_score(origin, VelocityPair{M_PI / 2.0, M_PI / 2.0}, Vec2{1.0, 2.0}, 1.0) ==
        doctest::Approx(1.0));
}

TEST_CASE("empty world with the goal dead ahead yields full speed, straight") {
  RobotLimits limits = turtle_limits();
  DWAConfig cfg;
  cfg.k = 21;
  Pose pose{0.0, 0.0, 0.0};
  VelocityPair current{0.5, 0.0};
  VelocityPair out = dwa_plan(pose, current, {}, Vec2{10.0, 0.0}, limits, cfg);
  CHECK(out.v == doctest::Approx(0.6));  // window top: 0.5 + 0.5 * 0.2
  CHECK(std::abs(out.w) < 1e-9);
  VelocityPair oracle = brute_force_plan(pose, current, {}, Vec2{10.0, 0.0}, limits, cfg);
  CHECK(out.v == oracle.v);
  CHECK(out.w == oracle.w);
}

TEST_CASE("wall dead ahead keeps the chosen command brakeable") {
  RobotLimits limits = turtle_limits();
  DWAConfig cfg;
  std::vector<Vec2> wall{{0.9, -0.2}, {0.9, 0.0}, {0.9, 0.2}};
  Pose pose{0.0, 0.0, 0.0};
  VelocityPair current{0.6, 0.0};
  VelocityPair out = dwa_plan(pose, current, wall, Vec2{10.0, 0.0}, limits, cfg);
  CHECK(feasible_window(current, limits).contains(out, 1e-12));
  double raw = dist_to_obstacles(pose, out, wall, limits, cfg.arc_samples);
  CHECK(admissible(out, std::max(0.0, raw - cfg.safety_margin), limits));
}

TEST_CASE("margin widens the berth the planner keeps") {
  RobotLimits limits = turtle_limits();
  Pose pose{0.0, 0.0, 0.0};
  VelocityPair current{0.5, 0.0};
  std::vector<Vec2> pts{{0.7, 0.0}};
  Vec2 goal{10.0, 0.0};
  DWAConfig tight;
  tight.k = 3;
  tight.safety_margin = 0.0;
  VelocityPair fast = dwa_plan(pose, current, pts, goal, limits, tight);
  CHECK(fast.v == doctest::Approx(0.6));
  CHECK(fast.w == doctest::Approx(0.0));
  DWAConfig wide;
  wide.k = 3;
  wide.safety_margin = 0.5;
  // the same obstacle now ends every forward arc: brake along the window floor
  VelocityPair slow = dwa_plan(pose, current, pts, goal, limits, wide);
  CHECK(slow.v == doctest::Approx(0.4));
  CHECK(slow.w == doctest::Approx(0.0));
}

TEST_CASE("no admissible pair falls back to the hardest stop in the window") {
  RobotLimits limits = turtle_limits();
  DWAConfig cfg;
  cfg.k = 2;  // grid without (0, 0)
  std::vector<Vec2> at_robot{{0.0, 0.0}};
  // from rest the window still straddles zero, so the stop is exact
  VelocityPair out = dwa_plan(Pose{0.0, 0.0, 0.0}, VelocityPair{0.0, 0.0}, at_robot,
                              Vec2{5.0, 0.0}, limits, cfg);
  CHECK(out.v == 0.0);
  CHECK(out.w == 0.0);
  // at speed the stop clamps to the window edge nearest zero
  VelocityPair moving{0.6, 1.0};
  out = dwa_plan(Pose{0.0, 0.0, 0.0}, moving, at_robot, Vec2{5.0, 0.0}, limits, cfg);
  CHECK(out.v == doctest::Approx(0.5));
  CHECK(out.w == doctest::Approx(0.6));
  CHECK(feasible_window(moving, limits).contains(out, 1e-12));
}

TEST_CASE("score ties prefer the smaller turn, then the earlier candidate") {
  RobotLimits limits = turtle_limits();
  Pose pose{0.0, 0.0, 0.0};
  VelocityPair current{0.6, 0.0};
  // zero weights make every admissible candidate score 0, isolating the ties
  DWAConfig flat;
  flat.k = 3;
  flat.alpha = 0.0;
  flat.beta = 0.0;
  flat.gamma = 0.0;
  VelocityPair out = dwa_plan(pose, current, {}, Vec2{10.0, 0.0}, limits, flat);
  CHECK(out.v == doctest::Approx(0.5));  // first linear value wins the index tie
  CHECK(out.w == doctest::Approx(0.0));  // |w| tie-break beats the earlier -0.4
  // k=2 has no zero-w column; the symmetric pair ties and the earlier index
  // (the negative w) is kept
  DWAConfig two;
  two.k = 2;
  out = dwa_plan(pose, current, {}, Vec2{10.0, 0.0}, limits, two);
  CHECK(out.v == doctest::Approx(0.65));
  CHECK(out.w == doctest::Approx(-0.4));
}

TEST_CASE("coarser than a 2x2 grid is rejected") {
  RobotLimits limits = turtle_limits();
  DWAConfig cfg;
  cfg.k = 1;
  CHECK_THROWS_AS(dwa_plan(Pose{0, 0, 0}, VelocityPair{0, 0}, {}, Vec2{1, 0}, limits, cfg),
                  std::invalid_argument);
  cfg.k = 0;
  CHECK_THROWS_AS(dwa_plan(Pose{0, 0, 0}, VelocityPair{0, 0}, {}, Vec2{1, 0}, limits, cfg),
                  std::invalid_argument);
}

TEST_CASE("planner matches the brute-force reference over random states") {
  RobotLimits limits = turtle_limits();
  std::mt19937_64 rng(60221);
  int fallback_states = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Pose pose{uniform_range(rng, -5, 5), uniform_range(rng, -5, 5),
              uniform_range(rng, -M_PI, M_PI)};
    VelocityPair current{uniform_range(rng, 0.0, limits.v_max),
                         uniform_range(rng, limits.w_min, limits.w_max)};
    Vec2 goal{pose.x + uniform_range(rng, -6, 6), pose.y + uniform_range(rng, -6, 6)};
    std::vector<Vec2> pts;
    std::size_t count = uniform_index(rng, 13);  // 0..12, sometimes empty
    for (std::size_t i = 0; i < count; ++i) {
      pts.push_back(Vec2{pose.x + uniform_range(rng, -1.5, 1.5),
                         pose.y + uniform_range(rng, -1.5, 1.5)});
    }
    DWAConfig cfg;
    cfg.k = 2 + static_cast<int>(uniform_index(rng, 6));  // 2..7
    VelocityPair out = dwa_plan(pose, current, pts, goal, limits, cfg);
    VelocityPair oracle = brute_force_plan(pose, current, pts, goal, limits, cfg);
    CHECK(out.v == oracle.v);
    CHECK(out.w == oracle.w);
    VelocityWindow window = feasible_window(current, limits);
    CHECK(window.contains(out, 1e-12));
    // count the stop fallbacks so the suite is known to exercise both paths
    bool any_admissible = false;
    for (const VelocityPair& cand : discretize_window(window, cfg.k)) {
      double raw = dist_to_obstacles(pose, cand, pts, limits, cfg.arc_samples);
      if (admissible(cand, std::max(0.0, raw - cfg.safety_margin), limits)) {
        any_admissible = true;
        break;
      }
    }
    if (!any_admissible) ++fallback_states;
  }
  CHECK(fallback_states > 0);
  CHECK(fallback_states < 500);
}

TEST_CASE("scaling the objective weights together never moves the argmax") {
  RobotLimits limits = turtle_limits();
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    Pose pose{uniform_range(rng, -3, 3), uniform_range(rng, -3, 3),
              uniform_range(rng, -M_PI, M_PI)};
    VelocityPair current{uniform_range(rng, 0.0, limits.v_max),
                         uniform_range(rng, limits.w_min, limits.w_max)};
    Vec2 goal{uniform_range(rng, -8, 8), uniform_range(rng, -8, 8)};
    std::vector<Vec2> pts;
    std::size_t count = uniform_index(rng, 7);
    for (std::size_t i = 0; i < count; ++i) {
      pts.push_back(Vec2{pose.x + uniform_range(rng, -1.5, 1.5),
                         pose.y + uniform_range(rng, -1.5, 1.5)});
    }
    DWAConfig base;
    base.k = 5;
    VelocityPair a = dwa_plan(pose, current, pts, goal, limits, base);
    double c = uniform_range(rng, 0.1, 10.0);
    DWAConfig scaled = base;
    if (trial % 2 == 0) {
      scaled.alpha *= c;
      scaled.beta *= c;
      scaled.gamma *= c;
    } else {
      scaled.sigma_gain *= c;
    }
    VelocityPair b = dwa_plan(pose, current, pts, goal, limits, scaled);
    CHECK(a.v == b.v);
    CHECK(a.w == b.w);
  }
}
