#include "dwarl/world.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dwarl {

Vec2 Obstacle::reference_point(const Vec2& from) const {
  if (kind == Kind::disc) return center;
  return closest_point_on_segment(seg_a, seg_b, from);
}

ObstacleHistory::ObstacleHistory(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("history: n < 1");
}

void ObstacleHistory::push(ScanResult scan) {
  if (!scans_.empty() && scan.timestamp <= scans_.back().timestamp) {
    throw std::invalid_argument("history: stale timestamp");
  }
  if (scans_.empty()) {
    for (int i = 0; i < n_; ++i) scans_.push_back(scan);
    return;
  }
  scans_.push_back(std::move(scan));
  while (static_cast<int>(scans_.size()) > n_) scans_.pop_front();
}

void ScenarioConfig::validate() const {
  limits.validate();
  if (!arena.contains(start.position())) throw std::invalid_argument("scenario: start outside arena");
  if (!arena.contains(goal)) throw std::invalid_argument("scenario: goal outside arena");
  if (max_steps < 1) throw std::invalid_argument("scenario: max_steps < 1");
  for (const Obstacle& o : obstacles) {
    if (o.kind == Obstacle::Kind::disc && o.radius <= 0.0)
      throw std::invalid_argument("scenario: disc radius <= 0");
    if (!o.waypoints.empty() && o.speed < 0.0)
      throw std::invalid_argument("scenario: walker speed < 0");
  }
}

namespace {

using nlohmann::json;

Vec2 parse_vec2(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("scenario: expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Obstacle parse_obstacle(const json& j) {
  Obstacle o;
  const std::string type = j.at("type").get<std::string>();
  if (type == "disc") {
    o.kind = Obstacle::Kind::disc;
    o.center = parse_vec2(j.at("center"));
    o.radius = j.value("radius", 0.15);
  } else if (type == "segment") {
    o.kind = Obstacle::Kind::segment;
    o.seg_a = parse_vec2(j.at("a"));
    o.seg_b = parse_vec2(j.at("b"));
  } else if (type == "walker") {
    o.kind = Obstacle::Kind::disc;
    o.radius = j.value("radius", 0.15);
    for (const auto& w : j.at("waypoints")) o.waypoints.push_back(parse_vec2(w));
    if (o.waypoints.empty()) throw std::invalid_argument("scenario: walker without waypoints");
    o.speed = j.at("speed").get<double>();
    o.loop = j.value("loop", false);
    o.center = o.waypoints.front();
  } else {
    throw std::invalid_argument("scenario: unknown obstacle type '" + type + "'");
  }
  return o;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario: parse error: ") + e.what());
  }
  ScenarioConfig cfg;
  cfg.name = j.value("name", std::string("unnamed"));
  if (j.contains("arena")) {
    cfg.arena.min = parse_vec2(j["arena"].at("min"));
    cfg.arena.max = parse_vec2(j["arena"].at("max"));
  }
  const auto& robot = j.at("robot");
  const auto& start = robot.at("start");
  if (!start.is_array() || start.size() != 3)
    throw std::invalid_argument("scenario: robot.start must be [x, y, theta]");
  cfg.start = {start[0].get<double>(), start[1].get<double>(), start[2].get<double>()};
  cfg.goal = parse_vec2(robot.at("goal"));
  if (j.contains("limits")) {
    const auto& l = j["limits"];
    cfg.limits.v_min = l.value("v_min", cfg.limits.v_min);
    cfg.limits.v_max = l.value("v_max", cfg.limits.v_max);
    cfg.limits.w_min = l.value("w_min", cfg.limits.w_min);
    cfg.limits.w_max = l.value("w_max", cfg.limits.w_max);
    cfg.limits.lin_accel = l.value("lin_accel", cfg.limits.lin_accel);
    cfg.limits.ang_accel = l.value("ang_accel", cfg.limits.ang_accel);
    cfg.limits.robot_radius = l.value("robot_radius", cfg.limits.robot_radius);
    cfg.limits.dt = l.value("dt", cfg.limits.dt);
  }
  if (j.contains("sensor")) {
    const auto& s = j["sensor"];
    cfg.sensor.beams = s.value("beams", cfg.sensor.beams);
    cfg.sensor.max_range = s.value("max_range", cfg.sensor.max_range);
    cfg.sensor.noise_sigma = s.value("noise_sigma", cfg.sensor.noise_sigma);
  }
  if (j.contains("randomization")) {
    const auto& r = j["randomization"];
    cfg.randomization.obstacle_jitter = r.value("obstacle_jitter", cfg.randomization.obstacle_jitter);
    cfg.randomization.walker_phase = r.value("walker_phase", cfg.randomization.walker_phase);
    cfg.randomization.goal_jitter = r.value("goal_jitter", cfg.randomization.goal_jitter);
  }
  for (const auto& o : j.value("obstacles", json::array())) cfg.obstacles.push_back(parse_obstacle(o));
  cfg.max_steps = j.value("max_steps", cfg.max_steps);
  cfg.goal_radius = j.value("goal_radius", cfg.goal_radius);
  cfg.collision_radius = j.value("collision_radius", cfg.collision_radius);
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

World::World(ScenarioConfig config) : config_(std::move(config)) {
  config_.validate();
  reset(0);
}

void World::reset(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  obstacles_ = config_.obstacles;
  const double jit = config_.randomization.obstacle_jitter;
  for (Obstacle& o : obstacles_) {
    if (o.kind != Obstacle::Kind::disc) continue;  // walls are structure, not jittered
    Vec2 shift{0.0, 0.0};
    if (jit > 0.0) {
      shift = {uniform_range(rng, -jit, jit), uniform_range(rng, -jit, jit)};
    }
    o.center = o.center + shift;
    for (Vec2& w : o.waypoints) w = w + shift;
    o.target_index = o.waypoints.empty() ? 0 : (o.waypoints.size() > 1 ? 1 : 0);
    o.direction = 1;
    if (o.is_walker()) {
      o.center = o.waypoints.front();
      if (config_.randomization.walker_phase) {
        // advance by a random fraction of one polyline traversal
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < o.waypoints.size(); ++i)
          total += dist(o.waypoints[i], o.waypoints[i + 1]);
        const double phase = uniform01(rng) * total;
        if (phase > 0.0 && o.speed > 0.0) {
          // temporarily walk the obstacle forward
          double remaining = phase;
          while (remaining > 0.0) {
            const Vec2 target = o.waypoints[static_cast<std::size_t>(o.target_index)];
            const double seg = dist(o.center, target);
            if (seg > remaining) {
              const Vec2 dir = (target - o.center) * (1.0 / seg);
              o.center = o.center + dir * remaining;
              break;
            }
            remaining -= seg;
            o.center = target;
            if (o.target_index + o.direction >= static_cast<int>(o.waypoints.size()) ||
                o.target_index + o.direction < 0) {
              if (o.loop) {
                o.target_index = 0;
              } else {
                o.direction = -o.direction;
                o.target_index += o.direction;
              }
            } else {
              o.target_index += o.direction;
            }
          }
        }
      }
    }
  }
  goal_ = config_.goal;
  const double gj = config_.randomization.goal_jitter;
  if (gj > 0.0) {
    goal_ = {goal_.x + uniform_range(rng, -gj, gj), goal_.y + uniform_range(rng, -gj, gj)};
    goal_.x = std::clamp(goal_.x, config_.arena.min.x, config_.arena.max.x);
    goal_.y = std::clamp(goal_.y, config_.arena.min.y, config_.arena.max.y);
  }
  robot_ = config_.start;
  velocity_ = {0.0, 0.0};
  step_index_ = 0;
  collided_ = false;
  reached_goal_ = false;
  prev_positions_.assign(obstacles_.size(), Vec2{});
  has_prev_.assign(obstacles_.size(), false);
  sensor_rng_.seed(seed ^ 0x9e3779b97f4a7c15ULL);
  update_flags();
}

void World::step(const VelocityPair& cmd) {
  const double dt = config_.limits.dt;
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    Obstacle& o = obstacles_[i];
    prev_positions_[i] = o.center;
    has_prev_[i] = true;
    if (!o.is_walker()) continue;
    double remaining = o.speed * dt;
    while (remaining > 0.0) {
      const Vec2 target = o.waypoints[static_cast<std::size_t>(o.target_index)];
      const double seg = dist(o.center, target);
      if (seg > remaining) {
        const Vec2 dir = (target - o.center) * (1.0 / seg);
        o.center = o.center + dir * remaining;
        break;
      }
      remaining -= seg;
      o.center = target;
      int next = o.target_index + o.direction;
      if (next >= static_cast<int>(o.waypoints.size()) || next < 0) {
        if (o.loop) {
          next = 0;
        } else {
          o.direction = -o.direction;
          next = o.target_index + o.direction;
          if (next < 0 || next >= static_cast<int>(o.waypoints.size())) break;  // single waypoint
        }
      }
      o.target_index = next;
    }
  }
  robot_ = arc_endpoint(robot_, cmd, dt);
  velocity_ = cmd;
  ++step_index_;
  update_flags();
}

void World::update_flags() {
  const Vec2 p = robot_.position();
  collided_ = false;
  for (const Obstacle& o : obstacles_) {
    if (dist(p, o.reference_point(p)) < config_.collision_radius) {
      collided_ = true;
      break;
    }
  }
  reached_goal_ = dist(p, goal_) < config_.goal_radius;
}

namespace {

// Smallest t >= 0 with |o + t d - c| = r, or nullopt.
std::optional<double> ray_disc(const Vec2& origin, const Vec2& dir, const Vec2& c, double r) {
  const Vec2 oc = origin - c;
  const double b = oc.dot(dir);
  const double csq = oc.squared_norm() - r * r;
  const double disc = b * b - csq;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double t0 = -b - sq;
  if (t0 >= 0.0) return t0;
  const double t1 = -b + sq;
  if (t1 >= 0.0) return t1;
  return std::nullopt;
}

std::optional<double> ray_segment(const Vec2& origin, const Vec2& dir, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double denom = dir.x * ab.y - dir.y * ab.x;
  if (std::abs(denom) < 1e-15) return std::nullopt;  // parallel
  const Vec2 ao = a - origin;
  const double t = (ao.x * ab.y - ao.y * ab.x) / denom;
  const double u = (ao.x * dir.y - ao.y * dir.x) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

}  // namespace

ScanResult World::sense() const {
  ScanResult scan;
  scan.timestamp = step_index_;
  const SensorConfig& s = config_.sensor;
  const Vec2 origin = robot_.position();
  scan.points.reserve(static_cast<std::size_t>(s.beams));
  for (int i = 0; i < s.beams; ++i) {
    const double angle = robot_.theta + 2.0 * M_PI * static_cast<double>(i) / s.beams;
    const Vec2 dir{std::cos(angle), std::sin(angle)};
    double best = std::numeric_limits<double>::infinity();
    for (const Obstacle& o : obstacles_) {
      std::optional<double> t;
      if (o.kind == Obstacle::Kind::disc) {
        t = ray_disc(origin, dir, o.center, o.radius);
      } else {
        t = ray_segment(origin, dir, o.seg_a, o.seg_b);
      }
      if (t && *t < best) best = *t;
    }
    if (s.noise_sigma > 0.0 && std::isfinite(best)) {
      best = std::max(0.0, best + s.noise_sigma * gaussian(sensor_rng_));
    }
    if (best <= s.max_range) {
      scan.points.push_back(origin + dir * best);
    }
  }
  return scan;
}

std::vector<ObstacleTrack> World::obstacle_tracks(ObstacleVelocityMode mode) const {
  std::vector<ObstacleTrack> tracks;
  const Vec2 p = robot_.position();
  const double dt = config_.limits.dt;
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    const Obstacle& o = obstacles_[i];
    ObstacleTrack t;
    t.position = o.reference_point(p);
    t.distance = dist(p, t.position);
    if (t.distance > config_.sensor.max_range) continue;
    t.velocity = {0.0, 0.0};
    if (o.is_walker()) {
      if (mode == ObstacleVelocityMode::ground_truth) {
        const Vec2 target = o.waypoints[static_cast<std::size_t>(o.target_index)];
        const double seg = dist(o.center, target);
        if (seg > 1e-12) t.velocity = (target - o.center) * (o.speed / seg);
      } else if (has_prev_[i]) {
        const Vec2 delta = o.center - prev_positions_[i];
        if (delta.norm() <= 0.5) t.velocity = delta * (1.0 / dt);  // association gate
      }
    }
    tracks.push_back(t);
  }
  return tracks;
}

}  // namespace dwarl
