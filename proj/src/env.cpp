#include "dwarl/env.hpp"

#include <stdexcept>

namespace dwarl {

NavEnv::NavEnv(ScenarioConfig scenario, EnvConfig cfg)
    : cfg_(cfg), world_(std::move(scenario)), history_(cfg.obs.n) {
  if (cfg_.sync_radii) {
    const ScenarioConfig& sc = world_.config();
    cfg_.reward.goal_radius = sc.goal_radius;
    cfg_.reward.collision_radius = sc.collision_radius;
    cfg_.reward.sensor_range = sc.sensor.max_range;
  }
}

const ObservationBlock& NavEnv::reset(std::uint64_t seed) {
  world_.reset(seed);
  history_.clear();
  history_.push(world_.sense());
  pose_history_.assign(static_cast<std::size_t>(cfg_.obs.n), world_.robot());
  outcome_ = Outcome::running;
  steps_ = 0;
  episode_reward_ = 0.0;
  rebuild_block();
  return block_;
}

EnvStep NavEnv::step_index(int action_index) {
  if (action_index < 0 || action_index >= static_cast<int>(block_.action_map.size()))
    throw std::out_of_range("NavEnv::step_index: action index out of range");
  return step_command(block_.action_map[static_cast<std::size_t>(action_index)]);
}

EnvStep NavEnv::step_command(const VelocityPair& cmd) {
  if (done()) throw std::logic_error("NavEnv: step after episode end");
  Pose prev = world_.robot();
  world_.step(cmd);
  history_.push(world_.sense());
  pose_history_.erase(pose_history_.begin());
  pose_history_.push_back(world_.robot());
  ++steps_;

  std::vector<ZoneAssessment> zones;
  for (const ObstacleTrack& track : world_.obstacle_tracks(cfg_.velocity_mode))
    zones.push_back(classify_zone(world_.robot().position(), track.position, track.velocity,
                                  cfg_.reward));

  EnvStep result;
  result.reward = step_reward(prev, world_.robot(), world_.goal(), zones, world_.collided(),
                              cfg_.reward);
  episode_reward_ += result.reward.total;

  if (world_.collided())
    outcome_ = Outcome::collision;
  else if (world_.reached_goal())
    outcome_ = Outcome::success;
  else if (steps_ >= world_.config().max_steps)
    outcome_ = Outcome::timeout;
  result.outcome = outcome_;
  result.done = done();

  rebuild_block();
  return result;
}

void NavEnv::rebuild_block() {
  const std::vector<Pose>* poses = cfg_.obs.past_robot_poses ? &pose_history_ : nullptr;
  block_ = make_observation(world_.velocity(), history_, world_.robot(), world_.goal(),
                            world_.config().limits, cfg_.obs, poses);
}

}  // namespace dwarl
