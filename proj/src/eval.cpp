#include "dwarl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dwarl/geometry.hpp"

namespace dwarl {

PolicyPlanner::PolicyPlanner(Policy policy, ActMode mode)
    : policy_(std::move(policy)), mode_(mode) {}

void PolicyPlanner::begin_episode(std::uint64_t seed) { rng_.seed(seed); }

VelocityPair PolicyPlanner::plan(const NavEnv& env) {
  const ObservationBlock& block = env.block();
  policy_.check_compatible(block.k, block.n);
  return policy_.act(block, mode_, rng_).command;
}

VelocityPair DwaPlanner::plan(const NavEnv& env) {
  return dwa_plan(env.world().robot(), env.world().velocity(), env.history().newest().points,
                  env.world().goal(), env.world().config().limits, cfg_);
}

VelocityPair RandomIndexPlanner::plan(const NavEnv& env) {
  const auto& map = env.block().action_map;
  return map[static_cast<std::size_t>(uniform_index(rng_, map.size()))];
}

UnconstrainedPlanner::UnconstrainedPlanner(const PolicyConfig& cfg, const RobotLimits& limits,
                                           std::uint64_t seed)
    : encoder_(cfg, hash_combine64(seed, 1)), limits_(limits) {
  NetConfig net_cfg = cfg.net_config();
  net_cfg.out_dim = 3;
  net_ = Net(net_cfg, hash_combine64(seed, 2));
  sigma_v_ = 0.25 * (limits.v_max - limits.v_min);
  sigma_w_ = 0.25 * (limits.w_max - limits.w_min);
}

void UnconstrainedPlanner::begin_episode(std::uint64_t seed) { rng_.seed(seed); }

VelocityPair UnconstrainedPlanner::plan(const NavEnv& env) {
  Eigen::VectorXd in = encoder_.encode(env.block());
  Eigen::MatrixXd out = net_.forward(in, false);
  double v = out(0, 0) + sigma_v_ * gaussian(rng_);
  double w = out(1, 0) + sigma_w_ * gaussian(rng_);
  return {std::clamp(v, limits_.v_min, limits_.v_max), std::clamp(w, limits_.w_min, limits_.w_max)};
}

const char* outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::success: return "success";
    case Outcome::collision: return "collision";
    case Outcome::timeout: return "timeout";
    default: return "running";
  }
}

double violation_rate(const EpisodeRecord& record, const RobotLimits& limits, double tol) {
  if (record.steps.empty()) throw std::invalid_argument("violation_rate: empty record");
  VelocityPair prev{0.0, 0.0};
  int violations = 0;
  for (const StepLog& s : record.steps) {
    VelocityWindow window = feasible_window(prev, limits);
    if (!window.contains(s.cmd, tol)) ++violations;
    prev = s.cmd;
  }
  return static_cast<double>(violations) / static_cast<double>(record.steps.size());
}

MetricsReport run_trials(Planner& planner, const ScenarioConfig& scenario,
                         const EnvConfig& env_cfg, int trials, std::uint64_t base_seed) {
  if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  MetricsReport report;
  report.scenario = scenario.name;
  report.planner = planner.name();
  report.trials = trials;
  report.base_seed = base_seed;

  NavEnv env(scenario, env_cfg);
  long total_steps = 0;
  long total_violations = 0;
  double sum_length = 0.0;
  double sum_time = 0.0;
  double sum_velocity = 0.0;

  for (int trial = 0; trial < trials; ++trial) {
    std::uint64_t trial_seed = hash_combine64(base_seed, static_cast<std::uint64_t>(trial));
    env.reset(trial_seed);
    planner.begin_episode(hash_combine64(trial_seed, 0x706c616e));

    EpisodeRecord record;
    record.scenario = scenario.name;
    record.seed = trial_seed;
    VelocityPair prev = env.world().velocity();
    while (!env.done()) {
      VelocityWindow window = feasible_window(prev, scenario.limits);
      VelocityPair cmd = planner.plan(env);
      Pose before = env.world().robot();
      EnvStep s = env.step_command(cmd);
      StepLog log;
      log.cmd = cmd;
      log.window = window;
      log.pose = env.world().robot();
      log.reward = s.reward.total;
      record.steps.push_back(log);
      record.length_m += dist(before.position(), log.pose.position());
      if (!window.contains(cmd, 1e-9)) ++record.violations;
      prev = cmd;
    }
    total_violations += record.violations;
    record.outcome = env.outcome();
    record.elapsed_s = static_cast<double>(record.steps.size()) * scenario.limits.dt;
    total_steps += static_cast<long>(record.steps.size());

    switch (record.outcome) {
      case Outcome::success:
        ++report.successes;
        sum_length += record.length_m;
        sum_time += record.elapsed_s;
        sum_velocity += record.length_m / record.elapsed_s;
        break;
      case Outcome::collision: ++report.collisions; break;
      default: ++report.timeouts; break;
    }
    report.episodes.push_back(std::move(record));
  }

  report.success_rate = static_cast<double>(report.successes) / trials;
  if (report.successes > 0) {
    report.avg_length = sum_length / report.successes;
    report.avg_time = sum_time / report.successes;
    report.avg_velocity = sum_velocity / report.successes;
  }
  report.violation_rate =
      total_steps > 0 ? static_cast<double>(total_violations) / static_cast<double>(total_steps)
                      : 0.0;
  return report;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string metrics_to_csv(const std::vector<MetricsReport>& reports) {
  std::string out =
      "row,scenario,planner,trial,seed,outcome,steps,length_m,time_s,avg_velocity_mps,"
      "violation_rate,success_rate\n";
  for (const MetricsReport& r : reports) {
    for (std::size_t i = 0; i < r.episodes.size(); ++i) {
      const EpisodeRecord& e = r.episodes[i];
      double avg_v = e.elapsed_s > 0.0 ? e.length_m / e.elapsed_s : 0.0;
      double viol = e.steps.empty() ? 0.0
                                    : static_cast<double>(e.violations) /
                                          static_cast<double>(e.steps.size());
      out += "trial," + r.scenario + "," + r.planner + "," + std::to_string(i) + "," +
             std::to_string(e.seed) + "," + outcome_name(e.outcome) + "," +
             std::to_string(e.steps.size()) + "," + fmt17(e.length_m) + "," +
             fmt17(e.elapsed_s) + "," + fmt17(avg_v) + "," + fmt17(viol) + "," +
             (e.outcome == Outcome::success ? "1" : "0") + "\n";
    }
    long total_steps = 0;
    for (const EpisodeRecord& e : r.episodes) total_steps += static_cast<long>(e.steps.size());
    out += "summary," + r.scenario + "," + r.planner + "," + std::to_string(r.trials) + "," +
           std::to_string(r.base_seed) + ",-," + std::to_string(total_steps) + "," +
           fmt17(r.avg_length) + "," + fmt17(r.avg_time) + "," + fmt17(r.avg_velocity) + "," +
           fmt17(r.violation_rate) + "," + fmt17(r.success_rate) + "\n";
  }
  return out;
}

std::string trajectory_to_csv(const EpisodeRecord& record) {
  std::string out = "step,x,y,theta,v,w,reward\n";
  for (std::size_t i = 0; i < record.steps.size(); ++i) {
    const StepLog& s = record.steps[i];
    out += std::to_string(i) + "," + fmt17(s.pose.x) + "," + fmt17(s.pose.y) + "," +
           fmt17(s.pose.theta) + "," + fmt17(s.cmd.v) + "," + fmt17(s.cmd.w) + "," +
           fmt17(s.reward) + "\n";
  }
  return out;
}

AblationResult ablation_suite(const AblationConfig& cfg) {
  AblationResult result;
  for (int arm = 0; arm < 2; ++arm) {
    EnvConfig env_cfg = cfg.env;
    PolicyConfig policy_cfg = cfg.policy;
    std::string arm_name;
    if (cfg.kind == AblationKind::positive_reinforcement) {
      bool on = (arm == 0);
      env_cfg.reward.positive_reinforcement = on;
      arm_name = on ? "pr-on" : "pr-off";
    } else {
      int channels = (arm == 0) ? 4 : 3;
      policy_cfg.channels = channels;
      arm_name = channels == 4 ? "obs-4ch" : "obs-3ch";
    }
    TrainResult trained = train(cfg.train_scenarios, env_cfg, policy_cfg, cfg.train);
    result.arm_names.push_back(arm_name);
    for (const ScenarioConfig& scenario : cfg.eval_scenarios) {
      PolicyPlanner planner(trained.policy, ActMode::greedy);
      MetricsReport report = run_trials(planner, scenario, env_cfg, cfg.trials, cfg.eval_seed);
      report.planner = arm_name;
      result.reports.push_back(std::move(report));
    }
    result.arm_policies.push_back(std::move(trained.policy));
  }
  return result;
}

}  // namespace dwarl
