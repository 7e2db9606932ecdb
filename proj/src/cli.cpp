#include "dwarl/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "dwarl/eval.hpp"

namespace dwarl {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using nlohmann::json;

constexpr const char* kToolVersion = "1.0.0";

struct MissingFile : std::exception {
  std::string message;
  explicit MissingFile(std::string m) : message(std::move(m)) {}
  const char* what() const noexcept override { return message.c_str(); }
};

std::string read_required_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Opts {
  std::string scenario;
  std::vector<std::string> eval_scenarios;
  std::string out;
  std::uint64_t seed = 0;

  std::optional<int> k, n, arc_samples, channels;
  bool past_poses = false;
  std::optional<double> dt;
  std::optional<double> collision_cost, goal_gain;
  std::optional<double> r_goal, r_collision, r_proximity, r_spatial, r_danger;
  std::optional<double> progress_gain, steer_radius;
  bool no_positive_reinforcement = false;

  std::optional<long> steps;
  std::optional<int> workers, steps_per_update, epochs, minibatch;
  std::optional<double> gamma, lam, clip, lr, entropy_coef, value_coef, reward_scale;
  std::vector<int> conv_channels;  // empty = keep default
  std::vector<int> fc_widths;

  std::string checkpoint;
  std::string save_checkpoint = "checkpoint.ckpt";
  std::string planner = "dwa";
  int trials = 50;
  int dump_steps = 5;
  bool dump_trajectories = false;
  bool ground_truth_velocities = false;
  std::string kind = "pr";
};

struct Resolved {
  ScenarioConfig scenario;
  ObservationConfig obs;
  RewardConfig reward;
  TrainConfig train;
  PolicyConfig policy;
  EnvConfig env;
  DWAConfig dwa;
  bool k_explicit = false;
  bool n_explicit = false;
};

void apply_scenario_blocks(const std::string& text, Resolved& r) {
  json j = json::parse(text);  // parse_scenario already validated syntax
  if (j.contains("observation")) {
    const auto& o = j["observation"];
    if (o.contains("k")) r.k_explicit = true;
    if (o.contains("n")) r.n_explicit = true;
    r.obs.k = o.value("k", r.obs.k);
    r.obs.n = o.value("n", r.obs.n);
    r.obs.arc_samples = o.value("arc_samples", r.obs.arc_samples);
    r.obs.collision_cost = o.value("collision_cost", r.obs.collision_cost);
    r.obs.goal_gain = o.value("goal_gain", r.obs.goal_gain);
    r.obs.past_robot_poses = o.value("past_robot_poses", r.obs.past_robot_poses);
  }
  if (j.contains("reward")) {
    const auto& w = j["reward"];
    r.reward.r_goal = w.value("r_goal", r.reward.r_goal);
    r.reward.r_collision = w.value("r_collision", r.reward.r_collision);
    r.reward.r_proximity = w.value("r_proximity", r.reward.r_proximity);
    r.reward.r_spatial = w.value("r_spatial", r.reward.r_spatial);
    r.reward.r_dcollision = w.value("r_dcollision", r.reward.r_dcollision);
    r.reward.progress_gain = w.value("progress_gain", r.reward.progress_gain);
    r.reward.steer_radius = w.value("steer_radius", r.reward.steer_radius);
    r.reward.positive_reinforcement =
        w.value("positive_reinforcement", r.reward.positive_reinforcement);
  }
  if (j.contains("train")) {
    const auto& t = j["train"];
    r.train.workers = t.value("workers", r.train.workers);
    r.train.steps_per_update = t.value("steps_per_update", r.train.steps_per_update);
    r.train.epochs = t.value("epochs", r.train.epochs);
    r.train.minibatch = t.value("minibatch", r.train.minibatch);
    r.train.gamma = t.value("gamma", r.train.gamma);
    r.train.lam = t.value("lam", r.train.lam);
    r.train.clip = t.value("clip", r.train.clip);
    r.train.lr = t.value("lr", r.train.lr);
    r.train.entropy_coef = t.value("entropy_coef", r.train.entropy_coef);
    r.train.value_coef = t.value("value_coef", r.train.value_coef);
    r.train.max_grad_norm = t.value("max_grad_norm", r.train.max_grad_norm);
    r.train.reward_scale = t.value("reward_scale", r.train.reward_scale);
    r.train.total_steps = t.value("total_steps", r.train.total_steps);
    r.train.normalize_advantages =
        t.value("normalize_advantages", r.train.normalize_advantages);
  }
  if (j.contains("policy")) {
    const auto& p = j["policy"];
    r.policy.channels = p.value("channels", r.policy.channels);
    if (p.contains("conv_channels"))
      r.policy.conv_channels = p["conv_channels"].get<std::vector<int>>();
    if (p.contains("fc_widths")) r.policy.fc_widths = p["fc_widths"].get<std::vector<int>>();
  }
}

Resolved resolve(const Opts& o) {
  if (o.scenario.empty()) throw std::invalid_argument("a --scenario file is required");
  std::string text = read_required_file(o.scenario);
  Resolved r;
  r.scenario = parse_scenario(text);
  apply_scenario_blocks(text, r);

  if (o.k) { r.obs.k = *o.k; r.k_explicit = true; }
  if (o.n) { r.obs.n = *o.n; r.n_explicit = true; }
  if (o.arc_samples) r.obs.arc_samples = *o.arc_samples;
  if (o.collision_cost) r.obs.collision_cost = *o.collision_cost;
  if (o.goal_gain) r.obs.goal_gain = *o.goal_gain;
  if (o.past_poses) r.obs.past_robot_poses = true;
  if (o.dt) r.scenario.limits.dt = *o.dt;

  if (o.r_goal) r.reward.r_goal = *o.r_goal;
  if (o.r_collision) r.reward.r_collision = *o.r_collision;
  if (o.r_proximity) r.reward.r_proximity = *o.r_proximity;
  if (o.r_spatial) r.reward.r_spatial = *o.r_spatial;
  if (o.r_danger) r.reward.r_dcollision = *o.r_danger;
  if (o.progress_gain) r.reward.progress_gain = *o.progress_gain;
  if (o.steer_radius) r.reward.steer_radius = *o.steer_radius;
  if (o.no_positive_reinforcement) r.reward.positive_reinforcement = false;

  if (o.steps) r.train.total_steps = *o.steps;
  if (o.workers) r.train.workers = *o.workers;
  if (o.steps_per_update) r.train.steps_per_update = *o.steps_per_update;
  if (o.epochs) r.train.epochs = *o.epochs;
  if (o.minibatch) r.train.minibatch = *o.minibatch;
  if (o.gamma) r.train.gamma = *o.gamma;
  if (o.lam) r.train.lam = *o.lam;
  if (o.clip) r.train.clip = *o.clip;
  if (o.lr) r.train.lr = *o.lr;
  if (o.entropy_coef) r.train.entropy_coef = *o.entropy_coef;
  if (o.value_coef) r.train.value_coef = *o.value_coef;
  if (o.reward_scale) r.train.reward_scale = *o.reward_scale;
  r.train.seed = o.seed;

  if (o.channels) r.policy.channels = *o.channels;
  if (!o.conv_channels.empty()) r.policy.conv_channels = o.conv_channels;
  if (!o.fc_widths.empty()) r.policy.fc_widths = o.fc_widths;
  r.policy.k = r.obs.k;
  r.policy.n = r.obs.n;
  r.policy.v_norm = r.scenario.limits.v_max;
  r.policy.w_norm = std::max(std::abs(r.scenario.limits.w_min), r.scenario.limits.w_max);
  r.policy.cost_norm = r.obs.collision_cost;

  r.env.obs = r.obs;
  r.env.reward = r.reward;
  r.env.velocity_mode = o.ground_truth_velocities ? ObstacleVelocityMode::ground_truth
                                                  : ObstacleVelocityMode::finite_difference;

  r.dwa.k = r.obs.k;
  r.dwa.arc_samples = r.obs.arc_samples;
  r.dwa.safety_margin = r.scenario.collision_radius;

  r.scenario.validate();
  r.scenario.limits.validate();
  r.train.validate();
  r.policy.validate();
  if (r.obs.k < 2) throw std::invalid_argument("k must be >= 2");
  if (r.obs.n < 1) throw std::invalid_argument("n must be >= 1");
  return r;
}

fs::path ensure_out_dir(const Opts& o) {
  fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

ordered_json limits_json(const RobotLimits& l) {
  return {{"v_min", l.v_min},         {"v_max", l.v_max},        {"w_min", l.w_min},
          {"w_max", l.w_max},         {"lin_accel", l.lin_accel}, {"ang_accel", l.ang_accel},
          {"robot_radius", l.robot_radius}, {"dt", l.dt}};
}

ordered_json resolved_json(const Resolved& r) {
  ordered_json m;
  m["scenario_name"] = r.scenario.name;
  m["limits"] = limits_json(r.scenario.limits);
  m["observation"] = {{"k", r.obs.k},
                      {"n", r.obs.n},
                      {"arc_samples", r.obs.arc_samples},
                      {"collision_cost", r.obs.collision_cost},
                      {"goal_gain", r.obs.goal_gain},
                      {"past_robot_poses", r.obs.past_robot_poses}};
  m["reward"] = {{"r_goal", r.reward.r_goal},
                 {"r_collision", r.reward.r_collision},
                 {"r_proximity", r.reward.r_proximity},
                 {"r_spatial", r.reward.r_spatial},
                 {"r_dcollision", r.reward.r_dcollision},
                 {"progress_gain", r.reward.progress_gain},
                 {"steer_radius", r.reward.steer_radius},
                 {"positive_reinforcement", r.reward.positive_reinforcement}};
  m["policy"] = {{"k", r.policy.k},
                 {"n", r.policy.n},
                 {"channels", r.policy.channels},
                 {"conv_channels", r.policy.conv_channels},
                 {"fc_widths", r.policy.fc_widths},
                 {"v_norm", r.policy.v_norm},
                 {"w_norm", r.policy.w_norm},
                 {"cost_norm", r.policy.cost_norm}};
  m["train"] = {{"workers", r.train.workers},
                {"steps_per_update", r.train.steps_per_update},
                {"epochs", r.train.epochs},
                {"minibatch", r.train.minibatch},
                {"gamma", r.train.gamma},
                {"lam", r.train.lam},
                {"clip", r.train.clip},
                {"lr", r.train.lr},
                {"entropy_coef", r.train.entropy_coef},
                {"value_coef", r.train.value_coef},
                {"max_grad_norm", r.train.max_grad_norm},
                {"reward_scale", r.train.reward_scale},
                {"total_steps", r.train.total_steps},
                {"normalize_advantages", r.train.normalize_advantages},
                {"seed", r.train.seed}};
  return m;
}

void write_manifest(const fs::path& dir, const std::string& name, const std::string& subcommand,
                    const Opts& o, const Resolved& r, const std::vector<std::string>& outputs) {
  ordered_json m;
  m["tool"] = "dwarl";
  m["version"] = kToolVersion;
  m["subcommand"] = subcommand;
  m["scenario_file"] = o.scenario;
  m["seed"] = o.seed;
  m["resolved"] = resolved_json(r);
  if (!o.checkpoint.empty()) m["checkpoint"] = o.checkpoint;
  m["outputs"] = outputs;
  write_text(dir / name, m.dump(2) + "\n");
}

// Loads the checkpoint for evaluation, adopting its shape when k/n were not
// pinned by the scenario or the command line, and rejecting real conflicts.
Policy load_policy_for(const Opts& o, Resolved& r) {
  if (o.checkpoint.empty())
    throw std::invalid_argument("this planner needs --checkpoint");
  if (!fs::exists(o.checkpoint)) throw MissingFile("cannot open file: " + o.checkpoint);
  Policy policy = Policy::load(o.checkpoint);
  const PolicyConfig& cfg = policy.config();
  if (r.k_explicit && cfg.k != r.obs.k)
    throw std::invalid_argument("checkpoint k=" + std::to_string(cfg.k) +
                                " contradicts configured k=" + std::to_string(r.obs.k));
  if (r.n_explicit && cfg.n != r.obs.n)
    throw std::invalid_argument("checkpoint n=" + std::to_string(cfg.n) +
                                " contradicts configured n=" + std::to_string(r.obs.n));
  r.obs.k = cfg.k;
  r.obs.n = cfg.n;
  r.env.obs = r.obs;
  r.dwa.k = cfg.k;
  return policy;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
  return out;
}

int cmd_train(const Opts& o) {
  Resolved r = resolve(o);
  fs::path dir = ensure_out_dir(o);
  TrainResult res = train({r.scenario}, r.env, r.policy, r.train);
  fs::path ckpt = dir / o.save_checkpoint;
  res.policy.save(ckpt.string());
  write_text(dir / "train_curve.csv", curve_to_csv(res.curve));
  write_manifest(dir, "manifest_train.json", "train", o, r,
                 {ckpt.string(), (dir / "train_curve.csv").string()});
  std::cout << "trained " << res.steps << " steps over " << res.updates << " updates, "
            << res.curve.size() << " episodes; checkpoint: " << ckpt.string() << "\n";
  return 0;
}

int cmd_eval(const Opts& o) {
  Resolved r = resolve(o);
  fs::path dir = ensure_out_dir(o);
  std::unique_ptr<Planner> planner;
  if (o.planner == "dwa") {
    planner = std::make_unique<DwaPlanner>(r.dwa);
  } else if (o.planner == "policy") {
    planner = std::make_unique<PolicyPlanner>(load_policy_for(o, r), ActMode::greedy);
  } else if (o.planner == "random") {
    planner = std::make_unique<RandomIndexPlanner>();
  } else {
    planner = std::make_unique<UnconstrainedPlanner>(r.policy, r.scenario.limits,
                                                     hash_combine64(o.seed, 0x756e63));
  }
  MetricsReport report = run_trials(*planner, r.scenario, r.env, o.trials, o.seed);
  std::string csv_name = "eval_" + sanitize(report.planner) + "_" + sanitize(r.scenario.name) + ".csv";
  write_text(dir / csv_name, metrics_to_csv({report}));
  std::vector<std::string> outputs{(dir / csv_name).string()};
  if (o.dump_trajectories) {
    for (std::size_t i = 0; i < report.episodes.size(); ++i) {
      std::string name = "traj_" + std::to_string(i) + ".csv";
      write_text(dir / name, trajectory_to_csv(report.episodes[i]));
      outputs.push_back((dir / name).string());
    }
  }
  write_manifest(dir, "manifest_eval.json", "eval", o, r, outputs);
  std::cout << "scenario=" << report.scenario << " planner=" << report.planner
            << " success_rate=" << report.success_rate
            << " violation_rate=" << report.violation_rate << "\n";
  return 0;
}

int cmd_compare(const Opts& o) {
  Resolved r = resolve(o);
  fs::path dir = ensure_out_dir(o);
  PolicyPlanner policy_planner(load_policy_for(o, r), ActMode::greedy);
  DwaPlanner dwa_planner(r.dwa);
  MetricsReport policy_report = run_trials(policy_planner, r.scenario, r.env, o.trials, o.seed);
  MetricsReport dwa_report = run_trials(dwa_planner, r.scenario, r.env, o.trials, o.seed);
  std::string csv_name = "compare_" + sanitize(r.scenario.name) + ".csv";
  write_text(dir / csv_name, metrics_to_csv({policy_report, dwa_report}));
  write_manifest(dir, "manifest_compare.json", "compare", o, r, {(dir / csv_name).string()});
  std::cout << "scenario=" << r.scenario.name << " policy=" << policy_report.success_rate
            << " dwa=" << dwa_report.success_rate << "\n";
  return 0;
}

int cmd_ablate(const Opts& o) {
  Resolved r = resolve(o);
  fs::path dir = ensure_out_dir(o);
  AblationConfig cfg;
  if (o.kind == "pr")
    cfg.kind = AblationKind::positive_reinforcement;
  else if (o.kind == "channels")
    cfg.kind = AblationKind::observation_channels;
  else
    throw std::invalid_argument("--kind must be 'pr' or 'channels'");
  cfg.train_scenarios = {r.scenario};
  if (o.eval_scenarios.empty()) {
    cfg.eval_scenarios = {r.scenario};
  } else {
    for (const std::string& path : o.eval_scenarios)
      cfg.eval_scenarios.push_back(parse_scenario(read_required_file(path)));
  }
  cfg.env = r.env;
  cfg.policy = r.policy;
  cfg.train = r.train;
  cfg.trials = o.trials;
  cfg.eval_seed = o.seed;
  AblationResult result = ablation_suite(cfg);
  std::string csv_name = "ablation_" + sanitize(o.kind) + ".csv";
  write_text(dir / csv_name, metrics_to_csv(result.reports));
  std::vector<std::string> outputs{(dir / csv_name).string()};
  for (std::size_t i = 0; i < result.arm_policies.size(); ++i) {
    fs::path ckpt = dir / ("ablation_" + sanitize(result.arm_names[i]) + ".ckpt");
    result.arm_policies[i].save(ckpt.string());
    outputs.push_back(ckpt.string());
  }
  write_manifest(dir, "manifest_ablate.json", "ablate", o, r, outputs);
  std::cout << "ablation " << o.kind << ": " << result.reports.size() << " reports written\n";
  return 0;
}

int cmd_dump_obs(const Opts& o) {
  Resolved r = resolve(o);
  fs::path dir = ensure_out_dir(o);
  NavEnv env(r.scenario, r.env);
  DwaPlanner driver(r.dwa);
  env.reset(o.seed);
  std::string text;
  for (int i = 0; i < o.dump_steps && !env.done(); ++i) {
    text += "step " + std::to_string(i) + "\n";
    text += dump_block(env.block());
    text += "\n";
    env.step_command(driver.plan(env));
  }
  write_text(dir / "obs_dump.txt", text);
  write_manifest(dir, "manifest_dump-obs.json", "dump-obs", o, r,
                 {(dir / "obs_dump.txt").string()});
  std::cout << "wrote " << (dir / "obs_dump.txt").string() << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  Opts o;
  if (const char* env_out = std::getenv("DWARL_OUT")) o.out = env_out;

  CLI::App app{"2-D navigation stack: dynamic-window policies, training, and evaluation"};
  app.set_version_flag("--version", std::string("dwarl ") + kToolVersion);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", o.scenario, "scenario JSON file")->required();
    cmd->add_option("--out", o.out, "output directory (env DWARL_OUT, default '.')");
    cmd->add_option("--seed", o.seed, "base seed");
    cmd->add_option("--k", o.k, "velocity samples per axis (actions = k*k)");
    cmd->add_option("--n", o.n, "scan history depth");
    cmd->add_option("--arc-samples", o.arc_samples, "poses sampled per rollout arc");
    cmd->add_option("--channels", o.channels, "observation channels: 4 or 3");
    cmd->add_flag("--past-poses", o.past_poses, "score history against past robot poses");
    cmd->add_option("--dt", o.dt, "control period, s");
    cmd->add_option("--collision-cost", o.collision_cost, "obstacle cost inside robot radius");
    cmd->add_option("--goal-gain", o.goal_gain, "goal alignment cost scale");
    cmd->add_option("--r-goal", o.r_goal, "goal reward");
    cmd->add_option("--r-collision", o.r_collision, "collision reward");
    cmd->add_option("--r-proximity", o.r_proximity, "red-zone proximity penalty scale");
    cmd->add_option("--r-spatial", o.r_spatial, "zone reward scale");
    cmd->add_option("--r-danger", o.r_danger, "in-range obstacle penalty scale");
    cmd->add_option("--progress-gain", o.progress_gain, "goal progress reward scale");
    cmd->add_option("--steer-radius", o.steer_radius, "red-zone activation distance, m");
    cmd->add_flag("--no-positive-reinforcement", o.no_positive_reinforcement,
                  "disable the green-zone bonus");
    cmd->add_flag("--ground-truth-velocities", o.ground_truth_velocities,
                  "use exact obstacle velocities instead of finite differences");
    cmd->add_option("--conv-channels", o.conv_channels, "conv stage widths")->delimiter(',');
    cmd->add_option("--fc-widths", o.fc_widths, "fully connected widths")->delimiter(',');
  };
  auto add_train_knobs = [&](CLI::App* cmd) {
    cmd->add_option("--steps", o.steps, "total environment steps");
    cmd->add_option("--workers", o.workers, "rollout workers");
    cmd->add_option("--steps-per-update", o.steps_per_update, "steps per worker per update");
    cmd->add_option("--epochs", o.epochs, "optimization epochs per update");
    cmd->add_option("--minibatch", o.minibatch, "minibatch size");
    cmd->add_option("--gamma", o.gamma, "discount factor");
    cmd->add_option("--lam", o.lam, "advantage estimation lambda");
    cmd->add_option("--clip", o.clip, "surrogate clip range");
    cmd->add_option("--lr", o.lr, "learning rate");
    cmd->add_option("--entropy-coef", o.entropy_coef, "entropy bonus coefficient");
    cmd->add_option("--value-coef", o.value_coef, "value loss coefficient");
    cmd->add_option("--reward-scale", o.reward_scale,
                    "learner-side reward multiplier for advantage estimation");
  };

  CLI::App* train_cmd = app.add_subcommand("train", "train a policy");
  add_common(train_cmd);
  add_train_knobs(train_cmd);
  train_cmd->add_option("--save-checkpoint", o.save_checkpoint, "checkpoint file name");

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a planner");
  add_common(eval_cmd);
  eval_cmd->add_option("--planner", o.planner, "planner to run")
      ->check(CLI::IsMember({"dwa", "policy", "random", "unconstrained"}));
  eval_cmd->add_option("--checkpoint", o.checkpoint, "trained policy checkpoint");
  eval_cmd->add_option("--trials", o.trials, "episodes to run");
  eval_cmd->add_flag("--dump-trajectories", o.dump_trajectories, "write per-trial trajectories");

  CLI::App* compare_cmd = app.add_subcommand("compare", "policy vs dwa on shared seeds");
  add_common(compare_cmd);
  compare_cmd->add_option("--checkpoint", o.checkpoint, "trained policy checkpoint")->required();
  compare_cmd->add_option("--trials", o.trials, "episodes per planner");

  CLI::App* ablate_cmd = app.add_subcommand("ablate", "train and evaluate ablation arms");
  add_common(ablate_cmd);
  add_train_knobs(ablate_cmd);
  ablate_cmd->add_option("--kind", o.kind, "pr (reward term) or channels (observation)")
      ->check(CLI::IsMember({"pr", "channels"}));
  ablate_cmd->add_option("--eval-scenario", o.eval_scenarios, "extra evaluation scenario files");
  ablate_cmd->add_option("--trials", o.trials, "episodes per arm and scenario");

  CLI::App* dump_cmd = app.add_subcommand("dump-obs", "write observation blocks as text");
  add_common(dump_cmd);
  dump_cmd->add_option("--steps", o.dump_steps, "number of steps to dump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(o);
    if (eval_cmd->parsed()) return cmd_eval(o);
    if (compare_cmd->parsed()) return cmd_compare(o);
    if (ablate_cmd->parsed()) return cmd_ablate(o);
    if (dump_cmd->parsed()) return cmd_dump_obs(o);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const MissingFile& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace dwarl
