#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace dwarl {

/// Shape of the policy/value network: a stack of 3x3 same-padding
/// convolutions over the (channels, rows, cols) observation tensor,
/// flattened into fully connected stages, ending in a linear output.
struct NetConfig {
  int in_c = 4;
  int in_h = 100;  // k*k rows
  int in_w = 10;   // n history columns
  std::vector<int> conv_channels = {32, 32, 64, 64, 64};
  std::vector<int> fc_widths = {256, 128};
  int out_dim = 101;  // action logits plus one value unit
  void validate() const;
};

struct ConvLayer {
  int in_c = 0;
  int out_c = 0;
  Eigen::MatrixXd kernel;  // out_c x (in_c*9)
  Eigen::VectorXd bias;
  Eigen::MatrixXd g_kernel;
  Eigen::VectorXd g_bias;
  Eigen::MatrixXd m_kernel, v_kernel;
  Eigen::VectorXd m_bias, v_bias;
};

struct FCLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
  Eigen::MatrixXd g_weight;
  Eigen::VectorXd g_bias;
  Eigen::MatrixXd m_weight, v_weight;
  Eigen::VectorXd m_bias, v_bias;
};

/// Double-precision convolutional network with manual backprop and Adam.
/// Samples are columns: each input column is a (in_c, in_h, in_w) tensor
/// flattened channel-major (index c*H*W + y*W + x). The final layer is
/// linear; every hidden stage uses ReLU.
class Net {
 public:
  Net() = default;
  Net(const NetConfig& cfg, std::uint64_t seed);

  /// Forward pass over a batch; caches activations when train is true.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, bool train = false);

  /// Backprop from the gradient of the loss wrt the output columns.
  /// Requires a preceding forward(..., true); accumulates into g_ fields.
  void backward(const Eigen::MatrixXd& grad_out);

  void zero_grad();
  void adam_step(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  /// Rescales accumulated gradients so their global L2 norm is at most
  /// max_norm. No-op when the norm is already within the bound.
  void clip_grad_norm(double max_norm);

  std::size_t parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);
  Eigen::VectorXd gradients() const;

  /// Drops cached activations (they can be large after a big batch).
  void clear_cache();

  const NetConfig& config() const { return cfg_; }

 private:
  NetConfig cfg_;
  std::vector<ConvLayer> conv_;
  std::vector<FCLayer> fc_;
  int adam_t_ = 0;

  // caches from the last training-mode forward
  std::vector<Eigen::MatrixXd> conv_cols_;  // im2col matrices per conv stage
  std::vector<Eigen::MatrixXd> conv_pre_;   // pre-activation outputs per conv stage
  std::vector<Eigen::MatrixXd> fc_in_;      // inputs per fc stage
  std::vector<Eigen::MatrixXd> fc_pre_;     // pre-activation outputs per fc stage
  int cached_batch_ = 0;
};

}  // namespace dwarl
