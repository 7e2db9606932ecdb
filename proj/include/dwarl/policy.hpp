#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dwarl/net.hpp"
#include "dwarl/observation.hpp"

namespace dwarl {

struct PolicyConfig {
  int k = 10;
  int n = 10;
  int channels = 4;  // 4: lin/ang/oc/gc, 3: lin/ang/total-cost
  std::vector<int> conv_channels = {32, 32, 64, 64, 64};
  std::vector<int> fc_widths = {256, 128};
  double v_norm = 0.65;   // linear velocities divided by this on encode
  double w_norm = 3.14;   // angular velocities likewise
  double cost_norm = 40.0;  // cost channels likewise
  void validate() const;
  NetConfig net_config() const;
};

enum class ActMode { sample, greedy };

struct ActResult {
  int index = 0;
  double log_prob = 0.0;
  double value = 0.0;
  VelocityPair command{0.0, 0.0};
};

/// Numerically stable softmax / log-softmax over a logit vector.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);
Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits);

/// Discrete policy over sorted action indices with a shared value head.
/// Normalization happens here, at the encode boundary; decoded commands
/// always come from the block's raw action_map.
class Policy {
 public:
  Policy() = default;
  Policy(const PolicyConfig& cfg, std::uint64_t seed);

  const PolicyConfig& config() const { return cfg_; }
  Net& net() { return net_; }
  const Net& net() const { return net_; }

  /// Flattens a sorted block into one normalized input column
  /// (channel-major, row-major within a channel).
  Eigen::VectorXd encode(const ObservationBlock& block) const;

  struct Heads {
    Eigen::VectorXd logits;
    double value = 0.0;
  };
  Heads evaluate(const ObservationBlock& block);

  /// Picks an action index: greedy takes the argmax logit (ties to the
  /// lowest index), sample draws from the softmax distribution.
  ActResult act(const ObservationBlock& block, ActMode mode, std::mt19937_64& rng);

  /// Throws when the block shape does not match this policy.
  void check_compatible(int k, int n) const;

  void save(const std::string& path) const;
  static Policy load(const std::string& path);

 private:
  PolicyConfig cfg_;
  Net net_;
};

}  // namespace dwarl
