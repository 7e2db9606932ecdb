#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dwarl/env.hpp"
#include "dwarl/policy.hpp"

namespace dwarl {

struct TrainConfig {
  int workers = 4;
  int steps_per_update = 2048;  // per worker
  int epochs = 4;
  int minibatch = 256;
  double gamma = 0.99;
  double lam = 0.95;
  double clip = 0.2;
  double lr = 3e-4;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;  // global L2 clip; <= 0 disables
  // Learner-side multiplier on rewards before advantage estimation. Keeps
  // value targets O(1) when the env hands out rewards in the thousands;
  // logged episode rewards stay raw.
  double reward_scale = 1.0;
  long total_steps = 300000;
  std::uint64_t seed = 0;
  bool normalize_advantages = true;
  void validate() const;
};

/// Generalized advantage estimation over one in-order batch. dones mark
/// terminal steps; last_value bootstraps the state after the final step
/// (pass 0 when that step was terminal). Returns (advantages, returns) with
/// returns = advantages + values exactly.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gae(const Eigen::VectorXd& rewards,
                                                const Eigen::VectorXd& values,
                                                const std::vector<bool>& dones, double gamma,
                                                double lam, double last_value = 0.0);

struct PPOLoss {
  double pg = 0.0;
  double value = 0.0;
  double entropy = 0.0;
  double total = 0.0;
};

/// Clipped-surrogate PPO loss over an encoded minibatch (columns of inputs).
/// With accumulate_grad the analytic gradient is backpropagated into the
/// net's grad buffers; pair with central differences to audit it.
PPOLoss ppo_loss(Net& net, const Eigen::MatrixXd& inputs, const std::vector<int>& actions,
                 const Eigen::VectorXd& old_logp, const Eigen::VectorXd& advantages,
                 const Eigen::VectorXd& returns, double clip, double value_coef,
                 double entropy_coef, bool accumulate_grad);

struct CurveRow {
  long step = 0;  // cumulative environment steps when the episode ended
  double episode_reward = 0.0;
  double pg_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct TrainResult {
  Policy policy;
  std::vector<CurveRow> curve;
  long steps = 0;
  int updates = 0;
};

std::string curve_to_csv(const std::vector<CurveRow>& curve);

/// PPO over parallel rollout workers. Workers hold isolated envs and a
/// parameter snapshot per round; batches merge in worker order, so results
/// do not depend on thread scheduling. Scenarios are dealt round-robin to
/// workers. Throws when the loss goes non-finite.
TrainResult train(const std::vector<ScenarioConfig>& scenarios, const EnvConfig& env_cfg,
                  const PolicyConfig& policy_cfg, const TrainConfig& cfg);

}  // namespace dwarl
