#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "dwarl/eval.hpp"

using namespace dwarl;

namespace {

ScenarioConfig open_field() {
  ScenarioConfig cfg;
  cfg.name = "open-field";
  cfg.arena.min = {-5.0, -5.0};
  cfg.arena.max = {15.0, 15.0};
  cfg.start = {0.0, 0.0, 0.0};
  cfg.goal = {10.0, 0.0};
  cfg.randomization.obstacle_jitter = 0.0;
  cfg.randomization.walker_phase = false;
  cfg.randomization.goal_jitter = 0.0;
  return cfg;
}

EnvConfig small_env() {
  EnvConfig cfg;
  cfg.obs.k = 3;
  cfg.obs.n = 2;
  return cfg;
}

// Drives straight at cruise speed no matter what.
class StraightPlanner : public Planner {
 public:
  std::string name() const override { return "straight"; }
  VelocityPair plan(const NavEnv&) override { return {0.65, 0.0}; }
};

EpisodeRecord record_from_commands(const std::vector<VelocityPair>& cmds) {
  EpisodeRecord r;
  for (const VelocityPair& c : cmds) {
    StepLog s;
    s.cmd = c;
    r.steps.push_back(s);
  }
  return r;
}

}  // namespace

TEST_CASE("violation rate counts steps outside the rolling window") {
  RobotLimits limits;  // defaults: v 0..0.65, accels 0.5 and 2.0, dt 0.2

  // full-speed jump from standstill: the one step violates
  CHECK(violation_rate(record_from_commands({{0.5, 0.0}}), limits) == 1.0);
  // gentle ramp: 0 -> 0.1 -> 0.2 stays inside each window
  CHECK(violation_rate(record_from_commands({{0.1, 0.0}, {0.2, 0.0}}), limits) == 0.0);
  // second step quadruples the speed: half the steps violate
  CHECK(violation_rate(record_from_commands({{0.1, 0.0}, {0.5, 0.0}}), limits) == 0.5);
  // angular jumps count the same way
  CHECK(violation_rate(record_from_commands({{0.0, 1.0}}), limits) == 1.0);
  // boundary sits inside the default tolerance
  CHECK(violation_rate(record_from_commands({{0.1 + 1e-12, 0.0}}), limits) == 0.0);
  CHECK(violation_rate(record_from_commands({{0.1005, 0.0}}), limits) == 1.0);

  CHECK_THROWS_AS(violation_rate(EpisodeRecord{}, limits), std::invalid_argument);
}

TEST_CASE("a straight 10 m drive produces textbook metrics") {
  ScenarioConfig sc = open_field();
  StraightPlanner planner;
  MetricsReport report = run_trials(planner, sc, small_env(), 3, 5);

  CHECK(report.trials == 3);
  CHECK(report.successes == 3);
  CHECK(report.success_rate == 1.0);
  // 75 steps of 0.13 m reach within 0.3 m of the goal at x = 10
  CHECK(report.avg_length == doctest::Approx(9.75).epsilon(1e-9));
  CHECK(report.avg_time == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(report.avg_velocity == doctest::Approx(0.65).epsilon(1e-9));
  // only the standing start breaks the window: 1 violation in 75 steps
  CHECK(report.violation_rate == doctest::Approx(1.0 / 75.0).epsilon(1e-12));
  for (const EpisodeRecord& e : report.episodes) {
    CHECK(e.steps.size() == 75);
    CHECK(e.violations == 1);
    CHECK(e.outcome == Outcome::success);
  }
}

TEST_CASE("aggregate metrics average successful trials only") {
  ScenarioConfig sc = open_field();
  sc.goal = {1.0, 0.0};
  sc.max_steps = 15;
  RandomIndexPlanner planner;
  MetricsReport report = run_trials(planner, sc, small_env(), 20, 3);

  REQUIRE(report.successes > 0);
  REQUIRE(report.successes < report.trials);
  CHECK(report.successes + report.collisions + report.timeouts == report.trials);

  double sum_len = 0.0, sum_time = 0.0, sum_vel = 0.0;
  long steps = 0;
  for (const EpisodeRecord& e : report.episodes) {
    steps += static_cast<long>(e.steps.size());
    if (e.outcome != Outcome::success) continue;
    sum_len += e.length_m;
    sum_time += e.elapsed_s;
    sum_vel += e.length_m / e.elapsed_s;
  }
  CHECK(report.avg_length == doctest::Approx(sum_len / report.successes).epsilon(1e-12));
  CHECK(report.avg_time == doctest::Approx(sum_time / report.successes).epsilon(1e-12));
  CHECK(report.avg_velocity == doctest::Approx(sum_vel / report.successes).epsilon(1e-12));

  // picking from the sorted action map can never leave the window
  CHECK(report.violation_rate == 0.0);
  CHECK(steps > 0);
}

TEST_CASE("per-trial seeds are distinct and runs repeat bit for bit") {
  ScenarioConfig sc = open_field();
  Obstacle disc;
  disc.kind = Obstacle::Kind::disc;
  disc.center = {4.0, 0.3};
  disc.radius = 0.3;
  sc.obstacles.push_back(disc);
  sc.randomization.obstacle_jitter = 0.3;
  sc.max_steps = 60;

  DWAConfig dwa_cfg;
  dwa_cfg.safety_margin = sc.collision_radius;
  DwaPlanner a(dwa_cfg);
  DwaPlanner b(dwa_cfg);
  MetricsReport ra = run_trials(a, sc, small_env(), 3, 42);
  MetricsReport rb = run_trials(b, sc, small_env(), 3, 42);
  CHECK(metrics_to_csv({ra}) == metrics_to_csv({rb}));

  CHECK(ra.episodes[0].seed != ra.episodes[1].seed);
  CHECK(ra.episodes[1].seed != ra.episodes[2].seed);

  DwaPlanner c(dwa_cfg);
  MetricsReport rc = run_trials(c, sc, small_env(), 3, 43);
  CHECK(metrics_to_csv({ra}) != metrics_to_csv({rc}));
}

TEST_CASE("csv shapes: a summary row per report, a row per trial") {
  ScenarioConfig sc = open_field();
  sc.goal = {1.0, 0.0};
  StraightPlanner planner;
  MetricsReport report = run_trials(planner, sc, small_env(), 4, 1);

  std::string csv = metrics_to_csv({report});
  CHECK(csv.rfind("row,scenario,planner,trial,seed,outcome,steps,", 0) == 0);
  long lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 1 + 4 + 1);  // header, four trials, summary
  CHECK(csv.find("open-field") != std::string::npos);
  CHECK(csv.find("straight") != std::string::npos);
  CHECK(csv.find("success") != std::string::npos);

  std::string traj = trajectory_to_csv(report.episodes[0]);
  CHECK(traj.rfind("step,x,y,theta,v,w,reward\n", 0) == 0);
  CHECK(std::count(traj.begin(), traj.end(), '\n') ==
        1 + static_cast<long>(report.episodes[0].steps.size()));
}

TEST_CASE("outcome names match their enum values") {
  CHECK(std::string(outcome_name(Outcome::success)) == "success");
  CHECK(std::string(outcome_name(Outcome::collision)) == "collision");
  CHECK(std::string(outcome_name(Outcome::timeout)) == "timeout");
  CHECK(std::string(outcome_name(Outcome::running)) == "running");
}

TEST_CASE("ablation trains two arms and evaluates both on every scenario") {
  ScenarioConfig train_sc = open_field();
  train_sc.max_steps = 20;
  ScenarioConfig eval_a = train_sc;
  eval_a.name = "eval-a";
  ScenarioConfig eval_b = train_sc;
  eval_b.name = "eval-b";
  eval_b.goal = {8.0, 1.0};

  AblationConfig cfg;
  cfg.kind = AblationKind::positive_reinforcement;
  cfg.train_scenarios = {train_sc};
  cfg.eval_scenarios = {eval_a, eval_b};
  cfg.env = small_env();
  cfg.policy.k = 3;
  cfg.policy.n = 2;
  cfg.policy.conv_channels = {4};
  cfg.policy.fc_widths = {16};
  cfg.train.workers = 1;
  cfg.train.steps_per_update = 64;
  cfg.train.epochs = 1;
  cfg.train.minibatch = 32;
  cfg.train.total_steps = 128;
  cfg.train.seed = 2;
  cfg.trials = 2;
  cfg.eval_seed = 11;

  AblationResult result = ablation_suite(cfg);
  REQUIRE(result.arm_names.size() == 2);
  CHECK(result.arm_names[0] == "pr-on");
  CHECK(result.arm_names[1] == "pr-off");
  REQUIRE(result.reports.size() == 4);  // 2 arms x 2 eval scenarios
  CHECK(result.reports[0].scenario == "eval-a");
  CHECK(result.reports[1].scenario == "eval-b");
  CHECK(result.reports[2].scenario == "eval-a");
  CHECK(result.reports[3].scenario == "eval-b");
  CHECK(result.reports[0].planner == "pr-on");
  CHECK(result.reports[3].planner == "pr-off");
  CHECK(result.arm_policies.size() == 2);
  // both arms saw the same evaluation seeds
  CHECK(result.reports[0].base_seed == result.reports[2].base_seed);

  AblationConfig channels = cfg;
  channels.kind = AblationKind::observation_channels;
  channels.eval_scenarios = {eval_a};
  AblationResult by_channel = ablation_suite(channels);
  CHECK(by_channel.arm_names[0] == "obs-4ch");
  CHECK(by_channel.arm_names[1] == "obs-3ch");
  REQUIRE(by_channel.reports.size() == 2);
  CHECK(by_channel.arm_policies[0].config().channels == 4);
  CHECK(by_channel.arm_policies[1].config().channels == 3);
}
