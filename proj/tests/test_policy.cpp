#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "dwarl/policy.hpp"

using namespace dwarl;

namespace {

PolicyConfig probe_config() {
  PolicyConfig cfg;
  cfg.k = 3;
  cfg.n = 2;
  cfg.channels = 4;
  cfg.conv_channels = {4, 4};
  cfg.fc_widths = {16};
  return cfg;
}

ObservationBlock probe_block(const PolicyConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int rows = cfg.k * cfg.k;
  ObservationBlock b;
  b.k = cfg.k;
  b.n = cfg.n;
  b.lin.resize(rows, cfg.n);
  b.ang.resize(rows, cfg.n);
  b.oc.resize(rows, cfg.n);
  b.gc.resize(rows, cfg.n);
  for (int y = 0; y < rows; ++y) {
    double v = uniform_range(rng, 0.0, 0.65);
    double w = uniform_range(rng, -3.14, 3.14);
    double g = uniform_range(rng, 0.0, 20.0);
    for (int x = 0; x < cfg.n; ++x) {
      b.lin(y, x) = v;
      b.ang(y, x) = w;
      b.oc(y, x) = uniform_range(rng, 0.0, 40.0);
      b.gc(y, x) = g;
    }
    b.action_map.push_back({v, w});
    b.sort_perm.push_back(y);
  }
  return b;
}

std::string temp_path(const char* stem) {
  return std::string("/tmp/dwarl_test_") + stem + "_" + std::to_string(::getpid()) + ".ckpt";
}

}  // namespace

TEST_CASE("softmax is a distribution and shifts cancel") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    int dim = 1 + static_cast<int>(uniform_index(rng, 64));
    Eigen::VectorXd logits(dim);
    for (int i = 0; i < dim; ++i) logits(i) = uniform_range(rng, -50.0, 50.0);
    Eigen::VectorXd p = softmax(logits);
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(p.minCoeff() >= 0.0);
    Eigen::VectorXd shifted = softmax((logits.array() + 1000.0).matrix());
    CHECK((p - shifted).lpNorm<Eigen::Infinity>() < 1e-12);
    Eigen::VectorXd lp = log_softmax(logits);
    CHECK((lp.array().exp().matrix() - p).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("uniform logits act greedily on the first index") {
  PolicyConfig cfg = probe_config();
  Policy policy(cfg, 5);
  policy.net().set_parameters(Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(policy.net().parameter_count())));
  ObservationBlock block = probe_block(cfg, 17);
  std::mt19937_64 rng(1);
  ActResult r = policy.act(block, ActMode::greedy, rng);
  CHECK(r.index == 0);
  CHECK(r.command.v == block.action_map[0].v);
  CHECK(r.command.w == block.action_map[0].w);
  CHECK(r.log_prob == doctest::Approx(-std::log(9.0)));
  CHECK(r.value == 0.0);
}

TEST_CASE("greedy takes the argmax and sampling is seed-reproducible") {
  PolicyConfig cfg = probe_config();
  Policy policy(cfg, 33);
  ObservationBlock block = probe_block(cfg, 2);

  Policy::Heads heads = policy.evaluate(block);
  REQUIRE(heads.logits.size() == 9);
  int argmax = 0;
  for (int i = 1; i < 9; ++i)
    if (heads.logits(i) > heads.logits(argmax)) argmax = i;
  std::mt19937_64 rng(3);
  ActResult g = policy.act(block, ActMode::greedy, rng);
  CHECK(g.index == argmax);
  CHECK(g.log_prob == doctest::Approx(log_softmax(heads.logits)(argmax)));

  std::mt19937_64 ra(99), rb(99), rc(100);
  bool all_equal_rc = true;
  for (int draw = 0; draw < 50; ++draw) {
    ActResult a = policy.act(block, ActMode::sample, ra);
    ActResult b = policy.act(block, ActMode::sample, rb);
    ActResult c = policy.act(block, ActMode::sample, rc);
    CHECK(a.index == b.index);
    CHECK(a.index >= 0);
    CHECK(a.index < 9);
    if (a.index != c.index) all_equal_rc = false;
  }
  CHECK_FALSE(all_equal_rc);
}

TEST_CASE("encode rescales each channel by its normalizer") {
  PolicyConfig cfg = probe_config();
  Policy policy(cfg, 1);
  ObservationBlock block = probe_block(cfg, 4);
  block.lin.setConstant(0.65);
  block.ang.setConstant(-3.14);
  block.oc.setConstant(40.0);
  block.gc.setConstant(20.0);
  Eigen::VectorXd flat = policy.encode(block);
  int hw = 9 * 2;
  REQUIRE(flat.size() == 4 * hw);
  CHECK(flat.head(hw).isApproxToConstant(1.0, 1e-12));
  CHECK(flat.segment(hw, hw).isApproxToConstant(-1.0, 1e-12));
  CHECK(flat.segment(2 * hw, hw).isApproxToConstant(1.0, 1e-12));
  CHECK(flat.segment(3 * hw, hw).isApproxToConstant(0.5, 1e-12));

  // channel-major, row-major inside a channel
  block.lin.setZero();
  block.lin(1, 0) = 0.65;
  flat = policy.encode(block);
  CHECK(flat(1 * cfg.n + 0) == doctest::Approx(1.0));
  CHECK(flat(0) == 0.0);

  ObservationBlock wrong = probe_block(cfg, 4);
  wrong.k = 4;
  CHECK_THROWS_AS(policy.encode(wrong), std::invalid_argument);
}

TEST_CASE("three-channel encoding folds the costs together") {
  PolicyConfig cfg = probe_config();
  cfg.channels = 3;
  Policy policy(cfg, 1);
  ObservationBlock block = probe_block(cfg, 4);
  block.oc.setConstant(40.0);
  block.gc.setConstant(20.0);
  Eigen::VectorXd flat = policy.encode(block);
  int hw = 9 * 2;
  REQUIRE(flat.size() == 3 * hw);
  CHECK(flat.segment(2 * hw, hw).isApproxToConstant(1.5, 1e-12));
}

TEST_CASE("checkpoints round-trip the policy exactly") {
  PolicyConfig cfg = probe_config();
  Policy saved(cfg, 2024);
  std::string path = temp_path("roundtrip");
  saved.save(path);
  Policy loaded = Policy::load(path);
  std::remove(path.c_str());

  CHECK(loaded.config().k == cfg.k);
  CHECK(loaded.config().n == cfg.n);
  CHECK(loaded.config().channels == cfg.channels);
  CHECK(loaded.config().conv_channels == cfg.conv_channels);
  CHECK(loaded.config().fc_widths == cfg.fc_widths);

  for (int trial = 0; trial < 100; ++trial) {
    ObservationBlock block = probe_block(cfg, 1000 + static_cast<std::uint64_t>(trial));
    Policy::Heads a = saved.evaluate(block);
    Policy::Heads b = loaded.evaluate(block);
    CHECK((a.logits - b.logits).lpNorm<Eigen::Infinity>() < 1e-6);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
  }
}

TEST_CASE("damaged checkpoints are refused") {
  PolicyConfig cfg = probe_config();
  Policy policy(cfg, 8);
  std::string path = temp_path("damage");
  policy.save(path);

  // truncate away the parameter tail
  {
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  }
  CHECK_THROWS_AS(Policy::load(path), std::runtime_error);

  // wrong leading bytes
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "definitely not a checkpoint";
  }
  CHECK_THROWS_WITH_AS(Policy::load(path), doctest::Contains("not a checkpoint"),
                       std::runtime_error);
  std::remove(path.c_str());

  CHECK_THROWS_AS(Policy::load("/nonexistent/dir/policy.ckpt"), std::runtime_error);
}

TEST_CASE("shape compatibility mismatches name both sides") {
  PolicyConfig cfg = probe_config();
  Policy policy(cfg, 8);
  CHECK_NOTHROW(policy.check_compatible(3, 2));
  CHECK_THROWS_WITH_AS(policy.check_compatible(5, 2),
                       "policy trained with k=3 but run configured with k=5",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(policy.check_compatible(3, 7),
                       "policy trained with n=2 but run configured with n=7",
                       std::invalid_argument);
}

TEST_CASE("bad policy configs are rejected") {
  PolicyConfig cfg = probe_config();
  cfg.k = 1;
  CHECK_THROWS_AS(Policy(cfg, 0), std::invalid_argument);
  cfg = probe_config();
  cfg.channels = 5;
  CHECK_THROWS_AS(Policy(cfg, 0), std::invalid_argument);
  cfg = probe_config();
  cfg.v_norm = 0.0;
  CHECK_THROWS_AS(Policy(cfg, 0), std::invalid_argument);
}
