#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "sauna/adam.hpp"
#include "sauna/batch.hpp"
#include "sauna/nets.hpp"
#include "sauna/rng.hpp"

namespace sauna {

struct PpoHyperparams {
  double clip = 0.2;            // surrogate clipping width
  int epochs = 10;              // passes over the batch per update
  int minibatch_size = 64;
  int horizon = 2048;           // T, accepted transitions per update
  double gamma = 0.99;
  double lambda = 0.95;         // GAE
  double c1 = 0.5;              // value loss coefficient
  double c2 = 0.5;              // vex loss coefficient
  double entropy_coef = 0.0;
  double max_grad_norm = 0.5;
  double learning_rate = 3e-4;
  double rho = 0.3;             // filtering threshold
  double epsilon0 = 1e-8;       // Laplace estimator in the filter ratio

  void validate() const;  // throws std::invalid_argument
};

// Clipped surrogate, piecewise in the sign of the advantage:
//   A >= 0: min(ratio * A, (1 + delta) * A)
//   A <  0: min(ratio * A, (1 - delta) * A)
double clip_objective(double advantage, double ratio, double delta);

// Same value plus d(value)/d(ratio); the gradient flows through the ratio
// only on the branch where ratio * A is the active minimum.
std::pair<double, double> clip_objective_with_grad(double advantage, double ratio,
                                                   double delta);

struct UpdateOptions {
  bool train_vex = true;         // include the c2 vex regression term
  bool isolate_vex_head = false; // stop vex gradients at the trunk boundary
};

// A view over one minibatch (columns of the batch matrices).
struct MinibatchView {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::VectorXd old_log_probs;
  Eigen::VectorXd advantages;  // already normalized
  Eigen::VectorXd returns;
};

struct LossParts {
  double total = 0.0;
  double surrogate = 0.0;  // -mean(clip objective), the minimized form
  double value = 0.0;      // mean squared value error (unweighted)
  double vex = 0.0;        // mean squared vex error (unweighted)
  double entropy = 0.0;
  double approx_kl = 0.0;
  bool finite = true;
};

// Composite minimization loss
//   -surrogate + c1 * value + c2 * vex - entropy_coef * entropy
// over one minibatch. When grads is non-null, parameter gradients are
// accumulated with the documented routing: surrogate -> policy parameters
// (and the shared trunk when the policy rides on it), value term -> trunk +
// value head, vex term -> vex head and, unless isolated, the trunk.
LossParts sauna_loss(AgentNets& nets, const MinibatchView& mb, double vex_target,
                     const PpoHyperparams& hyper, const UpdateOptions& opts,
                     AgentNetGrads* grads);

struct UpdateReport {
  double loss_surrogate = 0.0;
  double loss_value = 0.0;
  double loss_vex = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  // Unclipped gradient L1 norms (W and b together), averaged over minibatch
  // steps. Value/vex net order: trunk layers, value head, vex head layers.
  std::vector<double> grad_l1_value_vex_layers;
  std::vector<double> grad_l1_policy_layers;
  double grad_l1_first_layer = 0.0;  // trunk layer 0
  double grad_l1_last_layer = 0.0;   // value head
  std::vector<double> value_loss_per_epoch;
  int nonfinite_minibatches = 0;
  int rejected_adam_steps = 0;
};

// One full gradient update: `epochs` passes of shuffled minibatches.
// Advantages are normalized once over the whole batch. Per-layer L1 norms
// are recorded before clipping; each parameter group (policy, trunk+value
// head, vex head) is then norm-clipped at max_grad_norm independently.
UpdateReport ppo_update(AgentNets& nets, Adam& adam, const Batch& batch,
                        const PpoHyperparams& hyper, const UpdateOptions& opts,
                        Rng& shuffle_rng);

}  // namespace sauna
