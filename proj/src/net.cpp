#include "dwarl/net.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "dwarl/geometry.hpp"

namespace dwarl {
namespace {

// Feature maps travel between conv stages as (C x B*H*W): row = channel,
// column = sample-major pixel index b*H*W + y*W + x.

Eigen::MatrixXd to_featmap(const Eigen::MatrixXd& columns, int c, int hw) {
  Eigen::Index b = columns.cols();
  Eigen::MatrixXd out(c, b * hw);
  for (Eigen::Index s = 0; s < b; ++s)
    for (int ch = 0; ch < c; ++ch)
      for (int p = 0; p < hw; ++p)
        out(ch, s * hw + p) = columns(static_cast<Eigen::Index>(ch) * hw + p, s);
  return out;
}

Eigen::MatrixXd to_columns(const Eigen::MatrixXd& featmap, int c, int hw) {
  Eigen::Index b = featmap.cols() / hw;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(c) * hw, b);
  for (Eigen::Index s = 0; s < b; ++s)
    for (int ch = 0; ch < c; ++ch)
      for (int p = 0; p < hw; ++p)
        out(static_cast<Eigen::Index>(ch) * hw + p, s) = featmap(ch, s * hw + p);
  return out;
}

// 3x3 same-padding im2col: one column per output pixel, rows ordered
// channel-major then kernel row then kernel column.
Eigen::MatrixXd im2col(const Eigen::MatrixXd& featmap, int c, int h, int w) {
  int hw = h * w;
  Eigen::Index total = featmap.cols();
  Eigen::MatrixXd col = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c) * 9, total);
  Eigen::Index batch = total / hw;
  for (Eigen::Index s = 0; s < batch; ++s) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        Eigen::Index j = s * hw + y * w + x;
        for (int ky = 0; ky < 3; ++ky) {
          int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          for (int kx = 0; kx < 3; ++kx) {
            int sx = x + kx - 1;
            if (sx < 0 || sx >= w) continue;
            Eigen::Index src = s * hw + sy * w + sx;
            for (int ch = 0; ch < c; ++ch)
              col(static_cast<Eigen::Index>(ch) * 9 + ky * 3 + kx, j) = featmap(ch, src);
          }
        }
      }
    }
  }
  return col;
}

void col2im_add(const Eigen::MatrixXd& dcol, int c, int h, int w, Eigen::MatrixXd& dfeat) {
  int hw = h * w;
  Eigen::Index batch = dcol.cols() / hw;
  for (Eigen::Index s = 0; s < batch; ++s) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        Eigen::Index j = s * hw + y * w + x;
        for (int ky = 0; ky < 3; ++ky) {
          int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          for (int kx = 0; kx < 3; ++kx) {
            int sx = x + kx - 1;
            if (sx < 0 || sx >= w) continue;
            Eigen::Index dst = s * hw + sy * w + sx;
            for (int ch = 0; ch < c; ++ch)
              dfeat(ch, dst) += dcol(static_cast<Eigen::Index>(ch) * 9 + ky * 3 + kx, j);
          }
        }
      }
    }
  }
}

void adam_update(Eigen::MatrixXd& p, const Eigen::MatrixXd& g, Eigen::MatrixXd& m,
                 Eigen::MatrixXd& v, int t, double lr, double b1, double b2, double eps) {
  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v.array().matrix() + (1.0 - b2) * g.array().square().matrix();
  double c1 = 1.0 - std::pow(b1, t);
  double c2 = 1.0 - std::pow(b2, t);
  p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

void adam_update(Eigen::VectorXd& p, const Eigen::VectorXd& g, Eigen::VectorXd& m,
                 Eigen::VectorXd& v, int t, double lr, double b1, double b2, double eps) {
  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v.array().matrix() + (1.0 - b2) * g.array().square().matrix();
  double c1 = 1.0 - std::pow(b1, t);
  double c2 = 1.0 - std::pow(b2, t);
  p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

}  // namespace

void NetConfig::validate() const {
  if (in_c < 1 || in_h < 1 || in_w < 1) throw std::invalid_argument("NetConfig: bad input shape");
  if (conv_channels.empty()) throw std::invalid_argument("NetConfig: need at least one conv stage");
  for (int c : conv_channels)
    if (c < 1) throw std::invalid_argument("NetConfig: conv channel count must be positive");
  for (int f : fc_widths)
    if (f < 1) throw std::invalid_argument("NetConfig: fc width must be positive");
  if (out_dim < 1) throw std::invalid_argument("NetConfig: out_dim must be positive");
}

Net::Net(const NetConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  std::mt19937_64 rng(seed);
  int prev_c = cfg_.in_c;
  for (int oc : cfg_.conv_channels) {
    ConvLayer layer;
    layer.in_c = prev_c;
    layer.out_c = oc;
    int fan_in = prev_c * 9;
    double scale = std::sqrt(2.0 / fan_in);
    layer.kernel.resize(oc, fan_in);
    for (Eigen::Index i = 0; i < layer.kernel.size(); ++i)
      layer.kernel.data()[i] = gaussian(rng) * scale;
    layer.bias = Eigen::VectorXd::Zero(oc);
    layer.g_kernel = Eigen::MatrixXd::Zero(oc, fan_in);
    layer.g_bias = Eigen::VectorXd::Zero(oc);
    layer.m_kernel = layer.g_kernel;
    layer.v_kernel = layer.g_kernel;
    layer.m_bias = layer.g_bias;
    layer.v_bias = layer.g_bias;
    conv_.push_back(std::move(layer));
    prev_c = oc;
  }
  int prev = prev_c * cfg_.in_h * cfg_.in_w;
  std::vector<int> widths = cfg_.fc_widths;
  widths.push_back(cfg_.out_dim);
  for (std::size_t i = 0; i < widths.size(); ++i) {
    FCLayer layer;
    int out = widths[i];
    double scale = std::sqrt(2.0 / prev);
    if (i + 1 == widths.size()) scale *= 0.01;  // near-uniform initial policy
    layer.weight.resize(out, prev);
    for (Eigen::Index j = 0; j < layer.weight.size(); ++j)
      layer.weight.data()[j] = gaussian(rng) * scale;
    layer.bias = Eigen::VectorXd::Zero(out);
    layer.g_weight = Eigen::MatrixXd::Zero(out, prev);
    layer.g_bias = Eigen::VectorXd::Zero(out);
    layer.m_weight = layer.g_weight;
    layer.v_weight = layer.g_weight;
    layer.m_bias = layer.g_bias;
    layer.v_bias = layer.g_bias;
    fc_.push_back(std::move(layer));
    prev = out;
  }
}

Eigen::MatrixXd Net::forward(const Eigen::MatrixXd& input, bool train) {
  int hw = cfg_.in_h * cfg_.in_w;
  if (input.rows() != static_cast<Eigen::Index>(cfg_.in_c) * hw)
    throw std::invalid_argument("Net::forward: input row count does not match config");
  int batch = static_cast<int>(input.cols());
  if (train) {
    conv_cols_.clear();
    conv_pre_.clear();
    fc_in_.clear();
    fc_pre_.clear();
    cached_batch_ = batch;
  }

  Eigen::MatrixXd feat = to_featmap(input, cfg_.in_c, hw);
  int c = cfg_.in_c;
  for (ConvLayer& layer : conv_) {
    Eigen::MatrixXd col = im2col(feat, c, cfg_.in_h, cfg_.in_w);
    Eigen::MatrixXd pre = layer.kernel * col;
    pre.colwise() += layer.bias;
    if (train) {
      conv_cols_.push_back(std::move(col));
      conv_pre_.push_back(pre);
    }
    feat = pre.array().max(0.0).matrix();
    c = layer.out_c;
  }

  Eigen::MatrixXd act = to_columns(feat, c, hw);
  for (std::size_t i = 0; i < fc_.size(); ++i) {
    if (train) fc_in_.push_back(act);
    Eigen::MatrixXd pre = fc_[i].weight * act;
    pre.colwise() += fc_[i].bias;
    if (train) fc_pre_.push_back(pre);
    if (i + 1 == fc_.size())
      act = pre;  // linear output
    else
      act = pre.array().max(0.0).matrix();
  }
  return act;
}

void Net::backward(const Eigen::MatrixXd& grad_out) {
  if (fc_pre_.empty()) throw std::logic_error("Net::backward: no cached forward pass");
  if (grad_out.cols() != cached_batch_)
    throw std::invalid_argument("Net::backward: batch size mismatch");
  int hw = cfg_.in_h * cfg_.in_w;

  Eigen::MatrixXd da = grad_out;
  for (int i = static_cast<int>(fc_.size()) - 1; i >= 0; --i) {
    Eigen::MatrixXd dz;
    if (i + 1 == static_cast<int>(fc_.size()))
      dz = da;
    else
      dz = (da.array() * (fc_pre_[i].array() > 0.0).cast<double>()).matrix();
    fc_[i].g_weight += dz * fc_in_[i].transpose();
    fc_[i].g_bias += dz.rowwise().sum();
    da = fc_[i].weight.transpose() * dz;
  }

  int c = conv_.back().out_c;
  Eigen::MatrixXd dfeat = to_featmap(da, c, hw);
  for (int i = static_cast<int>(conv_.size()) - 1; i >= 0; --i) {
    Eigen::MatrixXd dpre =
        (dfeat.array() * (conv_pre_[i].array() > 0.0).cast<double>()).matrix();
    conv_[i].g_kernel += dpre * conv_cols_[i].transpose();
    conv_[i].g_bias += dpre.rowwise().sum();
    if (i > 0) {
      Eigen::MatrixXd dcol = conv_[i].kernel.transpose() * dpre;
      dfeat = Eigen::MatrixXd::Zero(conv_[i].in_c, dpre.cols());
      col2im_add(dcol, conv_[i].in_c, cfg_.in_h, cfg_.in_w, dfeat);
    }
  }
}

void Net::clear_cache() {
  conv_cols_.clear();
  conv_pre_.clear();
  fc_in_.clear();
  fc_pre_.clear();
  cached_batch_ = 0;
}

void Net::zero_grad() {
  for (ConvLayer& l : conv_) {
    l.g_kernel.setZero();
    l.g_bias.setZero();
  }
  for (FCLayer& l : fc_) {
    l.g_weight.setZero();
    l.g_bias.setZero();
  }
}

void Net::clip_grad_norm(double max_norm) {
  double sq = 0.0;
  for (const ConvLayer& l : conv_) sq += l.g_kernel.squaredNorm() + l.g_bias.squaredNorm();
  for (const FCLayer& l : fc_) sq += l.g_weight.squaredNorm() + l.g_bias.squaredNorm();
  double norm = std::sqrt(sq);
  if (norm <= max_norm || norm == 0.0) return;
  double s = max_norm / norm;
  for (ConvLayer& l : conv_) {
    l.g_kernel *= s;
    l.g_bias *= s;
  }
  for (FCLayer& l : fc_) {
    l.g_weight *= s;
    l.g_bias *= s;
  }
}

void Net::adam_step(double lr, double beta1, double beta2, double eps) {
  ++adam_t_;
  for (ConvLayer& l : conv_) {
    adam_update(l.kernel, l.g_kernel, l.m_kernel, l.v_kernel, adam_t_, lr, beta1, beta2, eps);
    adam_update(l.bias, l.g_bias, l.m_bias, l.v_bias, adam_t_, lr, beta1, beta2, eps);
  }
  for (FCLayer& l : fc_) {
    adam_update(l.weight, l.g_weight, l.m_weight, l.v_weight, adam_t_, lr, beta1, beta2, eps);
    adam_update(l.bias, l.g_bias, l.m_bias, l.v_bias, adam_t_, lr, beta1, beta2, eps);
  }
}

std::size_t Net::parameter_count() const {
  std::size_t n = 0;
  for (const ConvLayer& l : conv_) n += l.kernel.size() + l.bias.size();
  for (const FCLayer& l : fc_) n += l.weight.size() + l.bias.size();
  return n;
}

Eigen::VectorXd Net::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index at = 0;
  auto put = [&](const double* data, Eigen::Index n) {
    flat.segment(at, n) = Eigen::Map<const Eigen::VectorXd>(data, n);
    at += n;
  };
  for (const ConvLayer& l : conv_) {
    put(l.kernel.data(), l.kernel.size());
    put(l.bias.data(), l.bias.size());
  }
  for (const FCLayer& l : fc_) {
    put(l.weight.data(), l.weight.size());
    put(l.bias.data(), l.bias.size());
  }
  return flat;
}

void Net::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != static_cast<Eigen::Index>(parameter_count()))
    throw std::invalid_argument("Net::set_parameters: size mismatch");
  Eigen::Index at = 0;
  auto take = [&](double* data, Eigen::Index n) {
    Eigen::Map<Eigen::VectorXd>(data, n) = flat.segment(at, n);
    at += n;
  };
  for (ConvLayer& l : conv_) {
    take(l.kernel.data(), l.kernel.size());
    take(l.bias.data(), l.bias.size());
  }
  for (FCLayer& l : fc_) {
    take(l.weight.data(), l.weight.size());
    take(l.bias.data(), l.bias.size());
  }
}

Eigen::VectorXd Net::gradients() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index at = 0;
  auto put = [&](const double* data, Eigen::Index n) {
    flat.segment(at, n) = Eigen::Map<const Eigen::VectorXd>(data, n);
    at += n;
  };
  for (const ConvLayer& l : conv_) {
    put(l.g_kernel.data(), l.g_kernel.size());
    put(l.g_bias.data(), l.g_bias.size());
  }
  for (const FCLayer& l : fc_) {
    put(l.g_weight.data(), l.g_weight.size());
    put(l.g_bias.data(), l.g_bias.size());
  }
  return flat;
}

}  // namespace dwarl
