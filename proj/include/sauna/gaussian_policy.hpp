#pragma once

#include <Eigen/Dense>
#include <utility>

#include "sauna/dense_net.hpp"
#include "sauna/rng.hpp"

namespace sauna {

// Diagonal Gaussian over actions: the mean comes from a DenseNet, the
// log-std is a state-independent learnable vector clamped to
// [kLogStdMin, kLogStdMax] before exponentiation.
class GaussianPolicy {
 public:
  static constexpr double kLogStdMin = -20.0;
  static constexpr double kLogStdMax = 2.0;

  GaussianPolicy() = default;
  GaussianPolicy(DenseNet mean_net, int action_dim);

  DenseNet& mean_net() { return mean_net_; }
  const DenseNet& mean_net() const { return mean_net_; }
  Eigen::VectorXd& log_std() { return log_std_; }
  const Eigen::VectorXd& log_std() const { return log_std_; }

  Eigen::VectorXd clamped_std() const;

  // Sample an action for one state given the mean (no clipping; the
  // environment clips). Returns (action, log-prob).
  std::pair<Eigen::VectorXd, double> sample(const Eigen::VectorXd& mean, Rng& rng) const;

  // Log-density of each column of `actions` under the matching column of
  // `means`. Both are action_dim x n.
  Eigen::VectorXd log_prob(const Eigen::MatrixXd& means,
                           const Eigen::MatrixXd& actions) const;

  // Differential entropy; state-independent since the std is.
  double entropy() const;

  // Gradient plumbing for the batched loss:
  //   d(log p_t)/d(mean col t) = (a - mu) / sigma^2
  //   d(log p_t)/d(log_std_i)  = ((a_i - mu_i)^2 / sigma_i^2) - 1,
  // zeroed where the clamp is active. `weights` holds d(loss)/d(log p_t).
  // Returns d(loss)/d(means); adds the log-std part into log_std_grad.
  Eigen::MatrixXd log_prob_backward(const Eigen::MatrixXd& means,
                                    const Eigen::MatrixXd& actions,
                                    const Eigen::VectorXd& weights,
                                    Eigen::VectorXd& log_std_grad) const;

  // d(entropy)/d(log_std_i) = 1 where unclamped.
  void entropy_backward(double weight, Eigen::VectorXd& log_std_grad) const;

  // Convenience single-state forms (run the mean net internally).
  std::pair<double, double> log_prob_and_entropy(const Eigen::VectorXd& state,
                                                 const Eigen::VectorXd& action);

  int action_dim() const { return static_cast<int>(log_std_.size()); }

 private:
  DenseNet mean_net_;
  Eigen::VectorXd log_std_;
};

}  // namespace sauna
