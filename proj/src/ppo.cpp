#include "dwarl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "dwarl/geometry.hpp"

namespace dwarl {

void TrainConfig::validate() const {
  if (workers < 1) throw std::invalid_argument("TrainConfig: workers must be >= 1");
  if (steps_per_update < 1) throw std::invalid_argument("TrainConfig: steps_per_update must be >= 1");
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (minibatch < 1) throw std::invalid_argument("TrainConfig: minibatch must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("TrainConfig: gamma must be in (0, 1]");
  if (!(lam >= 0.0 && lam <= 1.0)) throw std::invalid_argument("TrainConfig: lambda must be in [0, 1]");
  if (!(clip > 0.0)) throw std::invalid_argument("TrainConfig: clip must be > 0");
  if (lr < 0.0) throw std::invalid_argument("TrainConfig: learning rate must be >= 0");
  if (!(reward_scale > 0.0)) throw std::invalid_argument("TrainConfig: reward_scale must be > 0");
  if (total_steps < 1) throw std::invalid_argument("TrainConfig: total_steps must be > 0");
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gae(const Eigen::VectorXd& rewards,
                                                const Eigen::VectorXd& values,
                                                const std::vector<bool>& dones, double gamma,
                                                double lam, double last_value) {
  Eigen::Index n = rewards.size();
  if (values.size() != n || static_cast<Eigen::Index>(dones.size()) != n)
    throw std::invalid_argument("gae: length mismatch");
  Eigen::VectorXd adv(n);
  double next_adv = 0.0;
  double next_value = last_value;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double mask = dones[static_cast<std::size_t>(i)] ? 0.0 : 1.0;
    double delta = rewards(i) + gamma * mask * next_value - values(i);
    next_adv = delta + gamma * lam * mask * next_adv;
    adv(i) = next_adv;
    next_value = values(i);
  }
  return {adv, adv + values};
}

PPOLoss ppo_loss(Net& net, const Eigen::MatrixXd& inputs, const std::vector<int>& actions,
                 const Eigen::VectorXd& old_logp, const Eigen::VectorXd& advantages,
                 const Eigen::VectorXd& returns, double clip, double value_coef,
                 double entropy_coef, bool accumulate_grad) {
  Eigen::Index b = inputs.cols();
  if (static_cast<Eigen::Index>(actions.size()) != b || old_logp.size() != b ||
      advantages.size() != b || returns.size() != b)
    throw std::invalid_argument("ppo_loss: batch length mismatch");
  Eigen::MatrixXd out = net.forward(inputs, accumulate_grad);
  int action_dim = static_cast<int>(out.rows()) - 1;

  PPOLoss loss;
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(out.rows(), b);
  double inv_b = 1.0 / static_cast<double>(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    Eigen::VectorXd logits = out.col(i).head(action_dim);
    Eigen::VectorXd logp = log_softmax(logits);
    Eigen::VectorXd p = logp.array().exp().matrix();
    int a = actions[static_cast<std::size_t>(i)];
    if (a < 0 || a >= action_dim) throw std::invalid_argument("ppo_loss: action out of range");

    double ratio = std::exp(logp(a) - old_logp(i));
    double adv = advantages(i);
    double s1 = ratio * adv;
    double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
    double s2 = clipped * adv;
    loss.pg -= std::min(s1, s2) * inv_b;

    double v = out(action_dim, i);
    double verr = v - returns(i);
    loss.value += 0.5 * verr * verr * inv_b;

    double h = -(p.array() * logp.array()).sum();
    loss.entropy += h * inv_b;

    if (accumulate_grad) {
      if (s1 <= s2) {
        // unclipped branch active: d(-s1)/dz_j = -adv*ratio*(1{j=a} - p_j)
        for (int j = 0; j < action_dim; ++j) {
          double ind = (j == a) ? 1.0 : 0.0;
          grad(j, i) += -adv * ratio * (ind - p(j)) * inv_b;
        }
      }
      // entropy bonus: d(-coef*H)/dz_j = coef * p_j * (log p_j + H)
      for (int j = 0; j < action_dim; ++j)
        grad(j, i) += entropy_coef * p(j) * (logp(j) + h) * inv_b;
      grad(action_dim, i) = value_coef * verr * inv_b;
    }
  }
  loss.total = loss.pg + value_coef * loss.value - entropy_coef * loss.entropy;
  if (accumulate_grad) net.backward(grad);
  return loss;
}

std::string curve_to_csv(const std::vector<CurveRow>& curve) {
  std::string out = "step,episode_reward,pg_loss,value_loss,entropy\n";
  char buf[160];
  for (const CurveRow& row : curve) {
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g\n", row.step,
                  row.episode_reward, row.pg_loss, row.value_loss, row.entropy);
    out += buf;
  }
  return out;
}

namespace {

struct WorkerBatch {
  std::vector<Eigen::VectorXd> obs;
  std::vector<int> actions;
  std::vector<double> logp;
  std::vector<double> values;
  std::vector<double> rewards;
  std::vector<bool> dones;
  double bootstrap = 0.0;
  // (step offset within this batch, total episode reward)
  std::vector<std::pair<int, double>> episodes;
};

struct WorkerState {
  NavEnv env;
  std::mt19937_64 rng;
  std::uint64_t episode_counter = 0;
  std::uint64_t base_seed = 0;
  bool fresh = true;

  WorkerState(const ScenarioConfig& scenario, const EnvConfig& env_cfg, std::uint64_t seed)
      : env(scenario, env_cfg), rng(hash_combine64(seed, 0x726f6c6c)), base_seed(seed) {}

  std::uint64_t next_trial_seed() { return hash_combine64(base_seed, episode_counter++); }
};

void rollout(WorkerState& st, Policy policy, int steps, WorkerBatch& out) {
  if (st.fresh) {
    st.env.reset(st.next_trial_seed());
    st.fresh = false;
  }
  out.obs.reserve(static_cast<std::size_t>(steps));
  for (int t = 0; t < steps; ++t) {
    out.obs.push_back(policy.encode(st.env.block()));
    ActResult a = policy.act(st.env.block(), ActMode::sample, st.rng);
    EnvStep s = st.env.step_index(a.index);
    out.actions.push_back(a.index);
    out.logp.push_back(a.log_prob);
    out.values.push_back(a.value);
    out.rewards.push_back(s.reward.total);
    out.dones.push_back(s.done);
    if (s.done) {
      out.episodes.emplace_back(t, st.env.episode_reward());
      st.env.reset(st.next_trial_seed());
    }
  }
  if (!out.dones.back()) out.bootstrap = policy.evaluate(st.env.block()).value;
}

}  // namespace

TrainResult train(const std::vector<ScenarioConfig>& scenarios, const EnvConfig& env_cfg,
                  const PolicyConfig& policy_cfg, const TrainConfig& cfg) {
  cfg.validate();
  if (scenarios.empty()) throw std::invalid_argument("train: no scenarios given");
  policy_cfg.validate();

  Policy policy(policy_cfg, hash_combine64(cfg.seed, 0x696e6974));
  std::vector<WorkerState> workers;
  workers.reserve(static_cast<std::size_t>(cfg.workers));
  for (int w = 0; w < cfg.workers; ++w)
    workers.emplace_back(scenarios[static_cast<std::size_t>(w) % scenarios.size()], env_cfg,
                         hash_combine64(cfg.seed, static_cast<std::uint64_t>(w) + 1));

  std::mt19937_64 shuffle_rng(hash_combine64(cfg.seed, 0x75706474));
  TrainResult result;
  result.curve.reserve(1024);

  long steps_done = 0;
  PPOLoss last_losses;
  int obs_dim = policy_cfg.channels * policy_cfg.k * policy_cfg.k * policy_cfg.n;

  while (steps_done < cfg.total_steps) {
    std::vector<WorkerBatch> batches(static_cast<std::size_t>(cfg.workers));
    if (cfg.workers == 1) {
      rollout(workers[0], policy, cfg.steps_per_update, batches[0]);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(static_cast<std::size_t>(cfg.workers));
      for (int w = 0; w < cfg.workers; ++w)
        threads.emplace_back([&, w] { rollout(workers[static_cast<std::size_t>(w)], policy,
                                              cfg.steps_per_update,
                                              batches[static_cast<std::size_t>(w)]); });
      for (std::thread& t : threads) t.join();
    }

    // merge in worker order so thread scheduling cannot reorder anything
    long batch_total = static_cast<long>(cfg.workers) * cfg.steps_per_update;
    Eigen::MatrixXd inputs(obs_dim, batch_total);
    std::vector<int> actions;
    actions.reserve(static_cast<std::size_t>(batch_total));
    Eigen::VectorXd old_logp(batch_total), adv(batch_total), ret(batch_total);
    Eigen::Index at = 0;
    for (int w = 0; w < cfg.workers; ++w) {
      WorkerBatch& batch = batches[static_cast<std::size_t>(w)];
      int len = static_cast<int>(batch.obs.size());
      Eigen::VectorXd r =
          Eigen::Map<Eigen::VectorXd>(batch.rewards.data(), len) * cfg.reward_scale;
      Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(batch.values.data(), len);
      auto [a_w, ret_w] = gae(r, v, batch.dones, cfg.gamma, cfg.lam, batch.bootstrap);
      for (int t = 0; t < len; ++t) {
        inputs.col(at) = batch.obs[static_cast<std::size_t>(t)];
        actions.push_back(batch.actions[static_cast<std::size_t>(t)]);
        old_logp(at) = batch.logp[static_cast<std::size_t>(t)];
        adv(at) = a_w(t);
        ret(at) = ret_w(t);
        ++at;
      }
      for (const auto& [offset, reward] : batch.episodes) {
        CurveRow row;
        row.step = steps_done + static_cast<long>(w) * cfg.steps_per_update + offset + 1;
        row.episode_reward = reward;
        row.pg_loss = last_losses.pg;
        row.value_loss = last_losses.value;
        row.entropy = last_losses.entropy;
        result.curve.push_back(row);
      }
    }
    steps_done += batch_total;

    if (cfg.normalize_advantages) {
      double mean = adv.mean();
      double sd = std::sqrt((adv.array() - mean).square().mean());
      adv = ((adv.array() - mean) / (sd + 1e-8)).matrix();
    }

    std::vector<int> order(static_cast<std::size_t>(batch_total));
    for (int i = 0; i < batch_total; ++i) order[static_cast<std::size_t>(i)] = i;
    PPOLoss sum;
    int updates_in_round = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      shuffle_indices(order, shuffle_rng);
      for (long start = 0; start < batch_total; start += cfg.minibatch) {
        long mb = std::min<long>(cfg.minibatch, batch_total - start);
        Eigen::MatrixXd x(obs_dim, mb);
        std::vector<int> a_mb(static_cast<std::size_t>(mb));
        Eigen::VectorXd lp_mb(mb), adv_mb(mb), ret_mb(mb);
        for (long i = 0; i < mb; ++i) {
          int src = order[static_cast<std::size_t>(start + i)];
          x.col(i) = inputs.col(src);
          a_mb[static_cast<std::size_t>(i)] = actions[static_cast<std::size_t>(src)];
          lp_mb(i) = old_logp(src);
          adv_mb(i) = adv(src);
          ret_mb(i) = ret(src);
        }
        policy.net().zero_grad();
        PPOLoss loss = ppo_loss(policy.net(), x, a_mb, lp_mb, adv_mb, ret_mb, cfg.clip,
                                cfg.value_coef, cfg.entropy_coef, true);
        if (!std::isfinite(loss.total))
          throw std::runtime_error("training diverged: non-finite loss");
        if (cfg.max_grad_norm > 0.0) policy.net().clip_grad_norm(cfg.max_grad_norm);
        policy.net().adam_step(cfg.lr);
        sum.pg += loss.pg;
        sum.value += loss.value;
        sum.entropy += loss.entropy;
        ++updates_in_round;
      }
    }
    policy.net().clear_cache();
    last_losses.pg = sum.pg / updates_in_round;
    last_losses.value = sum.value / updates_in_round;
    last_losses.entropy = sum.entropy / updates_in_round;
    ++result.updates;
  }

  result.policy = policy;
  result.steps = steps_done;
  return result;
}

}  // namespace dwarl
