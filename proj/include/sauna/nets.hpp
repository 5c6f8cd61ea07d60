#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sauna/dense_net.hpp"
#include "sauna/gaussian_policy.hpp"
#include "sauna/params.hpp"
#include "sauna/rng.hpp"

namespace sauna {

struct NetConfig {
  int state_dim = 0;
  int action_dim = 0;
  std::vector<int> hidden_sizes = {64, 64};
  // Default: the policy owns its own trunk; value and vex share one.
  // When set, policy/value/vex heads all read a single shared trunk.
  bool shared_policy_trunk = false;
};

// Gradient buffers shaped like AgentNets.
struct AgentNetGrads {
  DenseNetGrads policy;  // full mean net (separate) or policy head (shared)
  Eigen::VectorXd log_std;
  DenseNetGrads trunk;
  DenseNetGrads value_head;
  DenseNetGrads vex_head;

  void set_zero();
};

// The three function approximators of the algorithm: policy (diagonal
// Gaussian), value head, and vex head, the latter two reading a common
// trunk. Parameter order is fixed so the optimizer and checkpoints see one
// stable flat layout.
class AgentNets {
 public:
  AgentNets(NetConfig cfg, Rng& init_rng);

  const NetConfig& config() const { return cfg_; }
  bool shared_policy_trunk() const { return cfg_.shared_policy_trunk; }

  GaussianPolicy& policy() { return policy_; }
  const GaussianPolicy& policy() const { return policy_; }
  DenseNet& trunk() { return trunk_; }
  DenseNet& value_head() { return value_head_; }
  DenseNet& vex_head() { return vex_head_; }

  // Batched forwards for the update path. policy_mean_forward and
  // trunk_forward cache activations inside the respective nets.
  Eigen::MatrixXd policy_mean_forward(const Eigen::MatrixXd& states);
  const Eigen::MatrixXd& trunk_forward(const Eigen::MatrixXd& states);

  // Single-state conveniences for collection and evaluation.
  Eigen::VectorXd policy_mean(const Eigen::VectorXd& state);
  double value(const Eigen::VectorXd& state);
  double vex_prediction(const Eigen::VectorXd& state);
  // One combined pass: (mean, value, vex prediction) with a single trunk eval.
  void forward_all(const Eigen::VectorXd& state, Eigen::VectorXd& mean, double& value,
                   double& vex_pred);

  AgentNetGrads make_grads() const;

  // Flat layouts. grad_spans(g) mirrors param_spans() exactly.
  ParamSpans param_spans();
  ParamSpans grad_spans(AgentNetGrads& g) const;
  std::size_t param_count();

  // Gradient-clipping groups: the three updates of the algorithm are clipped
  // independently so the vex head cannot perturb the policy/value steps.
  //   policy group: mean net (or head) + log_std
  //   value group:  trunk + value head
  //   vex group:    vex head
  ParamSpans policy_group(AgentNetGrads& g) const;
  ParamSpans value_group(AgentNetGrads& g) const;
  ParamSpans vex_group(AgentNetGrads& g) const;

  // Layer order used for gradient-norm instrumentation of the value/vex
  // net: trunk layers, value head, vex head layers. The "first layer" is
  // trunk layer 0 and the "last layer" is the value head.
  std::size_t value_vex_layer_count() const;
  std::size_t value_head_layer_index() const { return trunk_.layer_count(); }

 private:
  NetConfig cfg_;
  GaussianPolicy policy_;   // owns the mean net (full net or head)
  DenseNet trunk_;          // tanh output: it is a hidden layer of the heads
  DenseNet value_head_;
  DenseNet vex_head_;
};

}  // namespace sauna
