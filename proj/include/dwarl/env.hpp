#pragma once

#include <cstdint>
#include <vector>

#include "dwarl/observation.hpp"
#include "dwarl/reward.hpp"
#include "dwarl/world.hpp"

namespace dwarl {

enum class Outcome { running, success, collision, timeout };

struct EnvConfig {
  ObservationConfig obs;
  RewardConfig reward;
  ObstacleVelocityMode velocity_mode = ObstacleVelocityMode::finite_difference;
  // Keep the reward's radii and sensor range in lockstep with the scenario so
  // the two layers never disagree about what counts as a collision or a goal.
  bool sync_radii = true;
};

struct EnvStep {
  RewardBreakdown reward;
  bool done = false;
  Outcome outcome = Outcome::running;
};

/// Episode loop around one world: sense, stack history, build the sorted
/// observation, execute a command, score it. Commands may come from the
/// sorted action space (step_index) or be raw velocity pairs (step_command)
/// for planners that bypass the sorted space.
class NavEnv {
 public:
  NavEnv(ScenarioConfig scenario, EnvConfig cfg);

  const ObservationBlock& reset(std::uint64_t seed);

  /// Executes the i-th entry of the current block's action map.
  EnvStep step_index(int action_index);
  /// Executes an arbitrary command (no feasibility filtering here).
  EnvStep step_command(const VelocityPair& cmd);

  const ObservationBlock& block() const { return block_; }
  const World& world() const { return world_; }
  const ObstacleHistory& history() const { return history_; }
  Outcome outcome() const { return outcome_; }
  bool done() const { return outcome_ != Outcome::running; }
  int steps() const { return steps_; }
  double episode_reward() const { return episode_reward_; }
  const EnvConfig& env_config() const { return cfg_; }

 private:
  void rebuild_block();

  EnvConfig cfg_;
  World world_;
  ObstacleHistory history_;
  std::vector<Pose> pose_history_;
  ObservationBlock block_;
  Outcome outcome_ = Outcome::running;
  int steps_ = 0;
  double episode_reward_ = 0.0;
};

}  // namespace dwarl
