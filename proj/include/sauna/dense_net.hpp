#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sauna/params.hpp"
#include "sauna/rng.hpp"

namespace sauna {

class DenseNet;

// Gradient accumulator shaped like a DenseNet's parameters.
struct DenseNetGrads {
  std::vector<Eigen::MatrixXd> W;
  std::vector<Eigen::VectorXd> b;

  void set_zero();
  ParamSpans spans(const std::string& prefix);
};

// Fully-connected feedforward net: tanh on hidden layers, identity on the
// output layer unless tanh_output is set (used when the net is a trunk whose
// last layer is itself a hidden layer of a larger model).
//
// forward() caches the per-layer activations for the most recent input;
// backward() consumes that cache, so the pairing is forward-then-backward
// on the same instance. Inputs are column vectors; a matrix input is a batch
// with one sample per column.
class DenseNet {
 public:
  DenseNet() = default;
  DenseNet(std::vector<int> layer_sizes, bool tanh_output = false);

  // Orthogonal init scaled by hidden_gain on hidden layers and output_gain on
  // the last layer; biases zero.
  void init_orthogonal(Rng& rng, double hidden_gain, double output_gain);

  const Eigen::MatrixXd& forward(const Eigen::MatrixXd& input);

  // upstream is d(loss)/d(output), same shape as the last forward's output.
  // Accumulates parameter gradients into grads and returns d(loss)/d(input).
  // Throws std::logic_error if called without a cached forward pass.
  Eigen::MatrixXd backward(const Eigen::MatrixXd& upstream, DenseNetGrads& grads);

  DenseNetGrads make_grads() const;
  ParamSpans param_spans(const std::string& prefix);

  int input_dim() const { return layer_sizes_.front(); }
  int output_dim() const { return layer_sizes_.back(); }
  std::size_t layer_count() const { return W_.size(); }
  std::size_t param_count() const;
  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  bool tanh_output() const { return tanh_output_; }

  Eigen::MatrixXd& weights(std::size_t layer) { return W_[layer]; }
  Eigen::VectorXd& biases(std::size_t layer) { return b_[layer]; }
  const Eigen::MatrixXd& weights(std::size_t layer) const { return W_[layer]; }
  const Eigen::VectorXd& biases(std::size_t layer) const { return b_[layer]; }

 private:
  std::vector<int> layer_sizes_;
  bool tanh_output_ = false;
  std::vector<Eigen::MatrixXd> W_;  // W_[l] maps layer l input -> output
  std::vector<Eigen::VectorXd> b_;
  std::vector<Eigen::MatrixXd> acts_;  // acts_[0] = input, acts_[l+1] = layer l output
  bool has_cache_ = false;
};

// Orthogonal (QR-based) initialization of a single matrix, scaled by gain.
void orthogonal_init(Eigen::MatrixXd& m, Rng& rng, double gain);

}  // namespace sauna
