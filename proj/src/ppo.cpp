#include "sauna/ppo.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sauna/returns.hpp"

namespace sauna {

void PpoHyperparams::validate() const {
  if (!(clip > 0.0 && clip < 1.0)) {
    throw std::invalid_argument("clip must be in (0, 1)");
  }
  if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
  if (c1 < 0.0 || c2 < 0.0) throw std::invalid_argument("c1 and c2 must be >= 0");
  if (epsilon0 <= 0.0) throw std::invalid_argument("epsilon0 must be > 0");
  if (epochs <= 0 || minibatch_size <= 0 || horizon <= 0) {
    throw std::invalid_argument("epochs, minibatch_size and horizon must be positive");
  }
  if (horizon % minibatch_size != 0) {
    throw std::invalid_argument("horizon must be a multiple of minibatch_size");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must be in [0, 1)");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must be in [0, 1]");
  }
  if (learning_rate < 0.0) throw std::invalid_argument("learning_rate must be >= 0");
  if (max_grad_norm < 0.0) throw std::invalid_argument("max_grad_norm must be >= 0");
  if (entropy_coef < 0.0) throw std::invalid_argument("entropy_coef must be >= 0");
}

double clip_objective(double advantage, double ratio, double delta) {
  return clip_objective_with_grad(advantage, ratio, delta).first;
}

std::pair<double, double> clip_objective_with_grad(double advantage, double ratio,
                                                   double delta) {
  const double unclipped = ratio * advantage;
  const double clipped =
      (advantage >= 0.0) ? (1.0 + delta) * advantage : (1.0 - delta) * advantage;
  if (unclipped <= clipped) {
    return {unclipped, advantage};
  }
  return {clipped, 0.0};
}

namespace {

// L1 norm of one layer's gradient (weights + bias).
double layer_l1(const DenseNetGrads& g, std::size_t l) {
  return g.W[l].cwiseAbs().sum() + g.b[l].cwiseAbs().sum();
}

std::vector<double> value_vex_layer_l1(const AgentNetGrads& g) {
  std::vector<double> out;
  for (std::size_t l = 0; l < g.trunk.W.size(); ++l) out.push_back(layer_l1(g.trunk, l));
  for (std::size_t l = 0; l < g.value_head.W.size(); ++l)
    out.push_back(layer_l1(g.value_head, l));
  for (std::size_t l = 0; l < g.vex_head.W.size(); ++l)
    out.push_back(layer_l1(g.vex_head, l));
  return out;
}

std::vector<double> policy_layer_l1(const AgentNetGrads& g) {
  std::vector<double> out;
  for (std::size_t l = 0; l < g.policy.W.size(); ++l) out.push_back(layer_l1(g.policy, l));
  return out;
}

}  // namespace

LossParts sauna_loss(AgentNets& nets, const MinibatchView& mb, double vex_target,
                     const PpoHyperparams& hyper, const UpdateOptions& opts,
                     AgentNetGrads* grads) {
  const Eigen::Index m = mb.states.cols();
  if (m == 0) throw std::invalid_argument("sauna_loss: empty minibatch");
  const double inv_m = 1.0 / static_cast<double>(m);

  GaussianPolicy& policy = nets.policy();
  const bool shared = nets.shared_policy_trunk();

  // Forward passes (caches live in the nets for the backward step).
  const Eigen::MatrixXd& features = nets.trunk_forward(mb.states);
  Eigen::MatrixXd means = shared ? policy.mean_net().forward(features)
                                 : policy.mean_net().forward(mb.states);
  Eigen::RowVectorXd v = nets.value_head().forward(features).row(0);
  Eigen::RowVectorXd vex = nets.vex_head().forward(features).row(0);

  const Eigen::VectorXd log_probs = policy.log_prob(means, mb.actions);

  LossParts parts;
  Eigen::VectorXd dloss_dlogp = Eigen::VectorXd::Zero(m);
  double surr_sum = 0.0, kl_sum = 0.0;
  for (Eigen::Index t = 0; t < m; ++t) {
    const double log_ratio = log_probs(t) - mb.old_log_probs(t);
    const double ratio = std::exp(log_ratio);
    auto [obj, dobj_dratio] =
        clip_objective_with_grad(mb.advantages(t), ratio, hyper.clip);
    surr_sum += obj;
    kl_sum += (ratio - 1.0) - log_ratio;
    // d(-mean surr)/d(log p) = -(1/m) * dobj/dratio * ratio
    dloss_dlogp(t) = -inv_m * dobj_dratio * ratio;
  }
  parts.surrogate = -surr_sum * inv_m;
  parts.approx_kl = kl_sum * inv_m;
  parts.entropy = policy.entropy();

  Eigen::RowVectorXd v_err = v - mb.returns.transpose();
  parts.value = v_err.squaredNorm() * inv_m;
  Eigen::RowVectorXd vex_err = vex.array() - vex_target;
  parts.vex = opts.train_vex ? vex_err.squaredNorm() * inv_m : 0.0;

  parts.total = parts.surrogate + hyper.c1 * parts.value +
                (opts.train_vex ? hyper.c2 * parts.vex : 0.0) -
                hyper.entropy_coef * parts.entropy;
  parts.finite = std::isfinite(parts.total);
  if (!parts.finite || grads == nullptr) {
    return parts;
  }

  // Backward: policy branch.
  Eigen::MatrixXd mean_grad =
      policy.log_prob_backward(means, mb.actions, dloss_dlogp, grads->log_std);
  policy.entropy_backward(-hyper.entropy_coef, grads->log_std);
  Eigen::MatrixXd trunk_up;
  if (shared) {
    trunk_up = policy.mean_net().backward(mean_grad, grads->policy);
  } else {
    policy.mean_net().backward(mean_grad, grads->policy);
    trunk_up = Eigen::MatrixXd::Zero(features.rows(), m);
  }

  // Value branch: d(c1 * mean (v - R)^2)/dv = 2 c1 (v - R) / m.
  Eigen::MatrixXd v_up = (2.0 * hyper.c1 * inv_m) * v_err;
  trunk_up += nets.value_head().backward(v_up, grads->value_head);

  // Vex branch, optionally stopped at the trunk boundary.
  if (opts.train_vex) {
    Eigen::MatrixXd vex_up = (2.0 * hyper.c2 * inv_m) * vex_err;
    Eigen::MatrixXd vex_trunk = nets.vex_head().backward(vex_up, grads->vex_head);
    if (!opts.isolate_vex_head) {
      trunk_up += vex_trunk;
    }
  }

  nets.trunk().backward(trunk_up, grads->trunk);
  return parts;
}

UpdateReport ppo_update(AgentNets& nets, Adam& adam, const Batch& batch,
                        const PpoHyperparams& hyper, const UpdateOptions& opts,
                        Rng& shuffle_rng) {
  const long T = batch.size();
  if (T < hyper.minibatch_size) {
    throw std::invalid_argument("ppo_update: batch shorter than one minibatch");
  }

  // Advantages are normalized once per batch; the vex target stays on the
  // raw return scale.
  const std::vector<double> adv_norm = normalize_advantages(
      std::span<const double>(batch.advantages.data(),
                              static_cast<std::size_t>(batch.advantages.size())));

  AgentNetGrads grads = nets.make_grads();
  const ParamSpans params = nets.param_spans();
  const ParamSpans grad_flat = nets.grad_spans(grads);

  UpdateReport report;
  report.grad_l1_value_vex_layers.assign(nets.value_vex_layer_count(), 0.0);
  report.grad_l1_policy_layers.assign(nets.policy().mean_net().layer_count(), 0.0);

  std::vector<int> order(static_cast<std::size_t>(T));
  std::iota(order.begin(), order.end(), 0);

  double surr_acc = 0.0, value_acc = 0.0, vex_acc = 0.0, ent_acc = 0.0, kl_acc = 0.0;
  long ok_minibatches = 0;

  const int n_minibatches = static_cast<int>(T) / hyper.minibatch_size;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_value = 0.0;
    int epoch_mb = 0;
    for (int b = 0; b < n_minibatches; ++b) {
      const auto first = order.begin() + static_cast<long>(b) * hyper.minibatch_size;
      const std::vector<int> idx(first, first + hyper.minibatch_size);

      MinibatchView mb;
      mb.states = batch.states(Eigen::all, idx);
      mb.actions = batch.actions(Eigen::all, idx);
      mb.old_log_probs = batch.old_log_probs(idx);
      mb.returns = batch.returns(idx);
      mb.advantages.resize(hyper.minibatch_size);
      for (int i = 0; i < hyper.minibatch_size; ++i) {
        mb.advantages(i) = adv_norm[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      }

      grads.set_zero();
      const LossParts parts = sauna_loss(nets, mb, batch.vex_target, hyper, opts, &grads);
      if (!parts.finite) {
        ++report.nonfinite_minibatches;
        continue;
      }

      // Instrumentation first: unclipped per-layer L1 norms.
      {
        const auto vv = value_vex_layer_l1(grads);
        for (std::size_t l = 0; l < vv.size(); ++l)
          report.grad_l1_value_vex_layers[l] += vv[l];
        const auto pl = policy_layer_l1(grads);
        for (std::size_t l = 0; l < pl.size(); ++l) report.grad_l1_policy_layers[l] += pl[l];
      }

      clip_global_norm(nets.policy_group(grads), hyper.max_grad_norm);
      clip_global_norm(nets.value_group(grads), hyper.max_grad_norm);
      clip_global_norm(nets.vex_group(grads), hyper.max_grad_norm);

      if (!adam.step(params, grad_flat)) {
        ++report.rejected_adam_steps;
        continue;
      }

      surr_acc += parts.surrogate;
      value_acc += parts.value;
      vex_acc += parts.vex;
      ent_acc += parts.entropy;
      kl_acc += parts.approx_kl;
      epoch_value += parts.value;
      ++epoch_mb;
      ++ok_minibatches;
    }
    report.value_loss_per_epoch.push_back(epoch_mb > 0 ? epoch_value / epoch_mb
                                                       : std::nan(""));
  }

  const double denom = std::max<long>(ok_minibatches, 1);
  report.loss_surrogate = surr_acc / denom;
  report.loss_value = value_acc / denom;
  report.loss_vex = vex_acc / denom;
  report.entropy = ent_acc / denom;
  report.approx_kl = kl_acc / denom;
  const long steps = ok_minibatches + report.rejected_adam_steps;
  const double norm_denom = std::max<long>(steps, 1);
  for (auto& x : report.grad_l1_value_vex_layers) x /= norm_denom;
  for (auto& x : report.grad_l1_policy_layers) x /= norm_denom;
  report.grad_l1_first_layer = report.grad_l1_value_vex_layers.front();
  report.grad_l1_last_layer =
      report.grad_l1_value_vex_layers[nets.value_head_layer_index()];
  return report;
}

}  // namespace sauna
