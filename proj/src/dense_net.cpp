#include "sauna/dense_net.hpp"

#include <Eigen/QR>
#include <stdexcept>

namespace sauna {

void DenseNetGrads::set_zero() {
  for (auto& m : W) m.setZero();
  for (auto& v : b) v.setZero();
}

ParamSpans DenseNetGrads::spans(const std::string& prefix) {
  ParamSpans out;
  for (std::size_t l = 0; l < W.size(); ++l) {
    out.push_back({prefix + ".W" + std::to_string(l), W[l].data(),
                   static_cast<std::size_t>(W[l].size())});
    out.push_back({prefix + ".b" + std::to_string(l), b[l].data(),
                   static_cast<std::size_t>(b[l].size())});
  }
  return out;
}

DenseNet::DenseNet(std::vector<int> layer_sizes, bool tanh_output)
    : layer_sizes_(std::move(layer_sizes)), tanh_output_(tanh_output) {
  if (layer_sizes_.size() < 2) {
    throw std::invalid_argument("DenseNet needs at least input and output sizes");
  }
  for (int n : layer_sizes_) {
    if (n <= 0) throw std::invalid_argument("DenseNet layer sizes must be positive");
  }
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    W_.emplace_back(Eigen::MatrixXd::Zero(layer_sizes_[l + 1], layer_sizes_[l]));
    b_.emplace_back(Eigen::VectorXd::Zero(layer_sizes_[l + 1]));
  }
}

void orthogonal_init(Eigen::MatrixXd& m, Rng& rng, double gain) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  const Eigen::Index big = std::max(rows, cols);
  const Eigen::Index small = std::min(rows, cols);

  Eigen::MatrixXd a(big, small);
  for (Eigen::Index j = 0; j < small; ++j)
    for (Eigen::Index i = 0; i < big; ++i) a(i, j) = rng.normal();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
  // Fix the sign convention so the decomposition is unique.
  Eigen::MatrixXd r = qr.matrixQR().topRows(small).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < small; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }

  if (rows >= cols) {
    m = gain * q;
  } else {
    m = gain * q.transpose();
  }
}

void DenseNet::init_orthogonal(Rng& rng, double hidden_gain, double output_gain) {
  for (std::size_t l = 0; l < W_.size(); ++l) {
    const double gain = (l + 1 == W_.size()) ? output_gain : hidden_gain;
    orthogonal_init(W_[l], rng, gain);
    b_[l].setZero();
  }
}

const Eigen::MatrixXd& DenseNet::forward(const Eigen::MatrixXd& input) {
  if (input.rows() != input_dim()) {
    throw std::invalid_argument("DenseNet::forward: input has " +
                                std::to_string(input.rows()) + " rows, expected " +
                                std::to_string(input_dim()));
  }
  if (!input.allFinite()) {
    throw std::invalid_argument("DenseNet::forward: non-finite input");
  }
  acts_.assign(1, input);
  acts_.reserve(W_.size() + 1);
  for (std::size_t l = 0; l < W_.size(); ++l) {
    Eigen::MatrixXd z = (W_[l] * acts_[l]).colwise() + b_[l];
    if (l + 1 < W_.size() || tanh_output_) {
      z = z.array().tanh();
    }
    acts_.push_back(std::move(z));
  }
  has_cache_ = true;
  return acts_.back();
}

Eigen::MatrixXd DenseNet::backward(const Eigen::MatrixXd& upstream,
                                   DenseNetGrads& grads) {
  if (!has_cache_) {
    throw std::logic_error("DenseNet::backward called before forward");
  }
  if (upstream.rows() != output_dim() || upstream.cols() != acts_.back().cols()) {
    throw std::invalid_argument("DenseNet::backward: upstream shape mismatch");
  }
  Eigen::MatrixXd g = upstream;
  for (std::size_t l = W_.size(); l-- > 0;) {
    if (l + 1 < W_.size() || tanh_output_) {
      // d tanh(z) = 1 - tanh(z)^2, and acts_ holds tanh(z).
      g.array() *= 1.0 - acts_[l + 1].array().square();
    }
    grads.W[l].noalias() += g * acts_[l].transpose();
    grads.b[l].noalias() += g.rowwise().sum();
    g = W_[l].transpose() * g;
  }
  return g;
}

DenseNetGrads DenseNet::make_grads() const {
  DenseNetGrads g;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    g.W.emplace_back(Eigen::MatrixXd::Zero(W_[l].rows(), W_[l].cols()));
    g.b.emplace_back(Eigen::VectorXd::Zero(b_[l].size()));
  }
  return g;
}

ParamSpans DenseNet::param_spans(const std::string& prefix) {
  ParamSpans out;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    out.push_back({prefix + ".W" + std::to_string(l), W_[l].data(),
                   static_cast<std::size_t>(W_[l].size())});
    out.push_back({prefix + ".b" + std::to_string(l), b_[l].data(),
                   static_cast<std::size_t>(b_[l].size())});
  }
  return out;
}

std::size_t DenseNet::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    n += static_cast<std::size_t>(W_[l].size()) + static_cast<std::size_t>(b_[l].size());
  }
  return n;
}

}  // namespace sauna
