#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dwarl/dwa.hpp"
#include "dwarl/env.hpp"
#include "dwarl/policy.hpp"
#include "dwarl/ppo.hpp"

namespace dwarl {

/// One decision-maker driving an episode. Planners read the env (current
/// observation block, world state, newest scan) and return the command to
/// execute; they never step the env themselves.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual std::string name() const = 0;
  virtual void begin_episode(std::uint64_t seed) { (void)seed; }
  virtual VelocityPair plan(const NavEnv& env) = 0;
};

/// Trained (or random-init) discrete policy over the sorted action space.
class PolicyPlanner : public Planner {
 public:
  PolicyPlanner(Policy policy, ActMode mode);
  std::string name() const override { return "policy"; }
  void begin_episode(std::uint64_t seed) override;
  VelocityPair plan(const NavEnv& env) override;

 private:
  Policy policy_;
  ActMode mode_;
  std::mt19937_64 rng_;
};

/// Classic dynamic-window baseline on the newest scan.
class DwaPlanner : public Planner {
 public:
  explicit DwaPlanner(DWAConfig cfg) : cfg_(cfg) {}
  std::string name() const override { return "dwa"; }
  VelocityPair plan(const NavEnv& env) override;

 private:
  DWAConfig cfg_;
};

/// Uniform random pick from the sorted action map; stays feasible by
/// construction, useful for stressing the feasibility guarantee.
class RandomIndexPlanner : public Planner {
 public:
  std::string name() const override { return "random-index"; }
  void begin_episode(std::uint64_t seed) override { rng_.seed(seed); }
  VelocityPair plan(const NavEnv& env) override;

 private:
  std::mt19937_64 rng_;
};

/// Ablation arm that regresses continuous velocities with the same network
/// architecture and clips them to the absolute caps only, ignoring the
/// acceleration window; reproduces the dynamics-violation phenomenon.
class UnconstrainedPlanner : public Planner {
 public:
  UnconstrainedPlanner(const PolicyConfig& cfg, const RobotLimits& limits, std::uint64_t seed);
  std::string name() const override { return "unconstrained"; }
  void begin_episode(std::uint64_t seed) override;
  VelocityPair plan(const NavEnv& env) override;

 private:
  Policy encoder_;  // reused for observation encoding only
  Net net_;         // three outputs: raw v, raw w, value
  RobotLimits limits_;
  double sigma_v_;
  double sigma_w_;
  std::mt19937_64 rng_;
};

struct StepLog {
  VelocityPair cmd;
  VelocityWindow window;  // window the command had to lie in
  Pose pose;              // pose after executing cmd
  double reward = 0.0;
};

struct EpisodeRecord {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<StepLog> steps;
  Outcome outcome = Outcome::running;
  double length_m = 0.0;   // sum of step displacements
  double elapsed_s = 0.0;  // simulated time
  int violations = 0;      // steps commanded outside their window
};

struct MetricsReport {
  std::string scenario;
  std::string planner;
  int trials = 0;
  int successes = 0;
  int collisions = 0;
  int timeouts = 0;
  double success_rate = 0.0;
  double avg_length = 0.0;    // over successful trials
  double avg_time = 0.0;      // over successful trials
  double avg_velocity = 0.0;  // over successful trials
  double violation_rate = 0.0;  // pooled over all steps of all trials
  std::uint64_t base_seed = 0;
  std::vector<EpisodeRecord> episodes;
};

const char* outcome_name(Outcome outcome);

/// Fraction of steps whose command lies outside the window implied by the
/// previously executed command (the first step starts from standstill).
double violation_rate(const EpisodeRecord& record, const RobotLimits& limits, double tol = 1e-9);

/// Runs `trials` episodes with per-trial seeds derived from base_seed.
MetricsReport run_trials(Planner& planner, const ScenarioConfig& scenario,
                         const EnvConfig& env_cfg, int trials, std::uint64_t base_seed);

/// One row per trial plus a summary row, %.17g numbers throughout.
std::string metrics_to_csv(const std::vector<MetricsReport>& reports);
std::string trajectory_to_csv(const EpisodeRecord& record);

enum class AblationKind { positive_reinforcement, observation_channels };

struct AblationConfig {
  AblationKind kind = AblationKind::positive_reinforcement;
  std::vector<ScenarioConfig> train_scenarios;
  std::vector<ScenarioConfig> eval_scenarios;
  EnvConfig env;
  PolicyConfig policy;
  TrainConfig train;
  int trials = 50;
  std::uint64_t eval_seed = 0;
};

struct AblationResult {
  std::vector<std::string> arm_names;            // two arms
  std::vector<MetricsReport> reports;            // one per (arm, eval scenario)
  std::vector<Policy> arm_policies;
};

/// Trains both arms of the requested ablation and evaluates each on every
/// eval scenario with shared seeds.
AblationResult ablation_suite(const AblationConfig& cfg);

}  // namespace dwarl
