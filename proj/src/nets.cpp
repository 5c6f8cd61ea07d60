#include "sauna/nets.hpp"

#include <cmath>
#include <stdexcept>

namespace sauna {

namespace {

std::vector<int> with_dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes;
  sizes.push_back(in);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  if (out > 0) sizes.push_back(out);
  return sizes;
}

}  // namespace

void AgentNetGrads::set_zero() {
  policy.set_zero();
  log_std.setZero();
  trunk.set_zero();
  value_head.set_zero();
  vex_head.set_zero();
}

AgentNets::AgentNets(NetConfig cfg, Rng& init_rng) : cfg_(std::move(cfg)) {
  if (cfg_.state_dim <= 0 || cfg_.action_dim <= 0 || cfg_.hidden_sizes.empty()) {
    throw std::invalid_argument("AgentNets: invalid dimensions");
  }
  const int feat = cfg_.hidden_sizes.back();
  const double root2 = std::sqrt(2.0);

  if (cfg_.shared_policy_trunk) {
    trunk_ = DenseNet(with_dims(cfg_.state_dim, cfg_.hidden_sizes, 0), true);
    policy_ = GaussianPolicy(DenseNet({feat, cfg_.action_dim}), cfg_.action_dim);
  } else {
    policy_ = GaussianPolicy(
        DenseNet(with_dims(cfg_.state_dim, cfg_.hidden_sizes, cfg_.action_dim)),
        cfg_.action_dim);
    trunk_ = DenseNet(with_dims(cfg_.state_dim, cfg_.hidden_sizes, 0), true);
  }
  value_head_ = DenseNet({feat, 1});
  vex_head_ = DenseNet({feat, feat, 1});

  // Small output gains keep the initial policy near its mean and the initial
  // value/vex predictions near zero.
  policy_.mean_net().init_orthogonal(init_rng, root2, 0.01);
  policy_.log_std().setZero();
  trunk_.init_orthogonal(init_rng, root2, root2);
  value_head_.init_orthogonal(init_rng, root2, 1.0);
  vex_head_.init_orthogonal(init_rng, root2, 0.01);
}

Eigen::MatrixXd AgentNets::policy_mean_forward(const Eigen::MatrixXd& states) {
  if (cfg_.shared_policy_trunk) {
    return policy_.mean_net().forward(trunk_.forward(states));
  }
  return policy_.mean_net().forward(states);
}

const Eigen::MatrixXd& AgentNets::trunk_forward(const Eigen::MatrixXd& states) {
  return trunk_.forward(states);
}

Eigen::VectorXd AgentNets::policy_mean(const Eigen::VectorXd& state) {
  return policy_mean_forward(state);
}

double AgentNets::value(const Eigen::VectorXd& state) {
  return value_head_.forward(trunk_.forward(state))(0, 0);
}

double AgentNets::vex_prediction(const Eigen::VectorXd& state) {
  return vex_head_.forward(trunk_.forward(state))(0, 0);
}

void AgentNets::forward_all(const Eigen::VectorXd& state, Eigen::VectorXd& mean,
                            double& value, double& vex_pred) {
  const Eigen::MatrixXd& features = trunk_.forward(state);
  value = value_head_.forward(features)(0, 0);
  vex_pred = vex_head_.forward(features)(0, 0);
  if (cfg_.shared_policy_trunk) {
    mean = policy_.mean_net().forward(features);
  } else {
    mean = policy_.mean_net().forward(state);
  }
}

AgentNetGrads AgentNets::make_grads() const {
  AgentNetGrads g;
  g.policy = policy_.mean_net().make_grads();
  g.log_std = Eigen::VectorXd::Zero(cfg_.action_dim);
  g.trunk = trunk_.make_grads();
  g.value_head = value_head_.make_grads();
  g.vex_head = vex_head_.make_grads();
  return g;
}

ParamSpans AgentNets::param_spans() {
  ParamSpans out = policy_.mean_net().param_spans("policy");
  out.push_back({"log_std", policy_.log_std().data(),
                 static_cast<std::size_t>(policy_.log_std().size())});
  for (auto& s : trunk_.param_spans("trunk")) out.push_back(s);
  for (auto& s : value_head_.param_spans("value_head")) out.push_back(s);
  for (auto& s : vex_head_.param_spans("vex_head")) out.push_back(s);
  return out;
}

ParamSpans AgentNets::grad_spans(AgentNetGrads& g) const {
  ParamSpans out = g.policy.spans("policy");
  out.push_back({"log_std", g.log_std.data(), static_cast<std::size_t>(g.log_std.size())});
  for (auto& s : g.trunk.spans("trunk")) out.push_back(s);
  for (auto& s : g.value_head.spans("value_head")) out.push_back(s);
  for (auto& s : g.vex_head.spans("vex_head")) out.push_back(s);
  return out;
}

std::size_t AgentNets::param_count() {
  return total_size(param_spans());
}

ParamSpans AgentNets::policy_group(AgentNetGrads& g) const {
  ParamSpans out = g.policy.spans("policy");
  out.push_back({"log_std", g.log_std.data(), static_cast<std::size_t>(g.log_std.size())});
  return out;
}

ParamSpans AgentNets::value_group(AgentNetGrads& g) const {
  ParamSpans out = g.trunk.spans("trunk");
  for (auto& s : g.value_head.spans("value_head")) out.push_back(s);
  return out;
}

ParamSpans AgentNets::vex_group(AgentNetGrads& g) const {
  return g.vex_head.spans("vex_head");
}

std::size_t AgentNets::value_vex_layer_count() const {
  return trunk_.layer_count() + value_head_.layer_count() + vex_head_.layer_count();
}

}  // namespace sauna
