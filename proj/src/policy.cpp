#include "dwarl/policy.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "dwarl/geometry.hpp"

namespace dwarl {
namespace {

constexpr char kMagic[8] = {'D', 'W', 'R', 'L', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v)))
    throw std::runtime_error("checkpoint truncated");
  return v;
}
std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v)))
    throw std::runtime_error("checkpoint truncated");
  return v;
}
double read_f64(std::istream& in) {
  double v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v)))
    throw std::runtime_error("checkpoint truncated");
  return v;
}

}  // namespace

void PolicyConfig::validate() const {
  if (k < 2) throw std::invalid_argument("PolicyConfig: k must be >= 2");
  if (n < 1) throw std::invalid_argument("PolicyConfig: n must be >= 1");
  if (channels != 3 && channels != 4)
    throw std::invalid_argument("PolicyConfig: channels must be 3 or 4");
  if (v_norm <= 0.0 || w_norm <= 0.0 || cost_norm <= 0.0)
    throw std::invalid_argument("PolicyConfig: normalization constants must be positive");
}

NetConfig PolicyConfig::net_config() const {
  NetConfig net;
  net.in_c = channels;
  net.in_h = k * k;
  net.in_w = n;
  net.conv_channels = conv_channels;
  net.fc_widths = fc_widths;
  net.out_dim = k * k + 1;
  return net;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  Eigen::ArrayXd shifted = logits.array() - logits.maxCoeff();
  Eigen::ArrayXd e = shifted.exp();
  return (e / e.sum()).matrix();
}

Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits) {
  Eigen::ArrayXd shifted = logits.array() - logits.maxCoeff();
  double lse = std::log(shifted.exp().sum());
  return (shifted - lse).matrix();
}

Policy::Policy(const PolicyConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  net_ = Net(cfg_.net_config(), seed);
}

Eigen::VectorXd Policy::encode(const ObservationBlock& block) const {
  int rows = cfg_.k * cfg_.k;
  int cols = cfg_.n;
  if (block.k != cfg_.k || block.n != cfg_.n)
    throw std::invalid_argument("Policy::encode: block shape mismatch");
  int hw = rows * cols;
  Eigen::VectorXd flat(static_cast<Eigen::Index>(cfg_.channels) * hw);
  auto put_channel = [&](int c, const Eigen::MatrixXd& m, double scale) {
    for (int y = 0; y < rows; ++y)
      for (int x = 0; x < cols; ++x)
        flat(static_cast<Eigen::Index>(c) * hw + y * cols + x) = m(y, x) * scale;
  };
  put_channel(0, block.lin, 1.0 / cfg_.v_norm);
  put_channel(1, block.ang, 1.0 / cfg_.w_norm);
  if (cfg_.channels == 4) {
    put_channel(2, block.oc, 1.0 / cfg_.cost_norm);
    put_channel(3, block.gc, 1.0 / cfg_.cost_norm);
  } else {
    put_channel(2, block.oc + block.gc, 1.0 / cfg_.cost_norm);
  }
  return flat;
}

Policy::Heads Policy::evaluate(const ObservationBlock& block) {
  Eigen::VectorXd in = encode(block);
  Eigen::MatrixXd out = net_.forward(in, false);
  Heads heads;
  int actions = cfg_.k * cfg_.k;
  heads.logits = out.col(0).head(actions);
  heads.value = out(actions, 0);
  return heads;
}

ActResult Policy::act(const ObservationBlock& block, ActMode mode, std::mt19937_64& rng) {
  Heads heads = evaluate(block);
  int actions = cfg_.k * cfg_.k;
  Eigen::VectorXd logp = log_softmax(heads.logits);
  int index = 0;
  if (mode == ActMode::greedy) {
    for (int i = 1; i < actions; ++i)
      if (heads.logits(i) > heads.logits(index)) index = i;
  } else {
    Eigen::VectorXd p = softmax(heads.logits);
    double u = uniform01(rng);
    double acc = 0.0;
    index = actions - 1;  // guard against rounding shortfall
    for (int i = 0; i < actions; ++i) {
      acc += p(i);
      if (u < acc) {
        index = i;
        break;
      }
    }
  }
  ActResult result;
  result.index = index;
  result.log_prob = logp(index);
  result.value = heads.value;
  result.command = block.action_map.at(static_cast<std::size_t>(index));
  return result;
}

void Policy::check_compatible(int k, int n) const {
  if (k != cfg_.k)
    throw std::invalid_argument("policy trained with k=" + std::to_string(cfg_.k) +
                                " but run configured with k=" + std::to_string(k));
  if (n != cfg_.n)
    throw std::invalid_argument("policy trained with n=" + std::to_string(cfg_.n) +
                                " but run configured with n=" + std::to_string(n));
}

void Policy::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, kVersion);
  write_u32(out, static_cast<std::uint32_t>(cfg_.k));
  write_u32(out, static_cast<std::uint32_t>(cfg_.n));
  write_u32(out, static_cast<std::uint32_t>(cfg_.channels));
  write_u32(out, static_cast<std::uint32_t>(cfg_.conv_channels.size()));
  for (int c : cfg_.conv_channels) write_u32(out, static_cast<std::uint32_t>(c));
  write_u32(out, static_cast<std::uint32_t>(cfg_.fc_widths.size()));
  for (int f : cfg_.fc_widths) write_u32(out, static_cast<std::uint32_t>(f));
  write_f64(out, cfg_.v_norm);
  write_f64(out, cfg_.w_norm);
  write_f64(out, cfg_.cost_norm);
  Eigen::VectorXd params = net_.parameters();
  write_u64(out, static_cast<std::uint64_t>(params.size()));
  out.write(reinterpret_cast<const char*>(params.data()),
            static_cast<std::streamsize>(params.size() * sizeof(double)));
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Policy Policy::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a checkpoint file: " + path);
  std::uint32_t version = read_u32(in);
  if (version != kVersion)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  PolicyConfig cfg;
  cfg.k = static_cast<int>(read_u32(in));
  cfg.n = static_cast<int>(read_u32(in));
  cfg.channels = static_cast<int>(read_u32(in));
  std::uint32_t nconv = read_u32(in);
  if (nconv > 64) throw std::runtime_error("checkpoint corrupt: conv stage count");
  cfg.conv_channels.clear();
  for (std::uint32_t i = 0; i < nconv; ++i) cfg.conv_channels.push_back(static_cast<int>(read_u32(in)));
  std::uint32_t nfc = read_u32(in);
  if (nfc > 64) throw std::runtime_error("checkpoint corrupt: fc stage count");
  cfg.fc_widths.clear();
  for (std::uint32_t i = 0; i < nfc; ++i) cfg.fc_widths.push_back(static_cast<int>(read_u32(in)));
  cfg.v_norm = read_f64(in);
  cfg.w_norm = read_f64(in);
  cfg.cost_norm = read_f64(in);
  Policy policy(cfg, 0);
  std::uint64_t count = read_u64(in);
  if (count != policy.net_.parameter_count())
    throw std::runtime_error("checkpoint parameter count mismatch");
  Eigen::VectorXd params(static_cast<Eigen::Index>(count));
  if (!in.read(reinterpret_cast<char*>(params.data()),
               static_cast<std::streamsize>(count * sizeof(double))))
    throw std::runtime_error("checkpoint truncated");
  policy.net_.set_parameters(params);
  return policy;
}

}  // namespace dwarl
