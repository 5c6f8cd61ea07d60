#include "sauna/gaussian_policy.hpp"

#include <cmath>
#include <stdexcept>

namespace sauna {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // ln(2*pi)
}

GaussianPolicy::GaussianPolicy(DenseNet mean_net, int action_dim)
    : mean_net_(std::move(mean_net)), log_std_(Eigen::VectorXd::Zero(action_dim)) {
  if (mean_net_.output_dim() != action_dim) {
    throw std::invalid_argument("GaussianPolicy: mean net output dim != action dim");
  }
}

Eigen::VectorXd GaussianPolicy::clamped_std() const {
  return log_std_.array().max(kLogStdMin).min(kLogStdMax).exp();
}

std::pair<Eigen::VectorXd, double> GaussianPolicy::sample(const Eigen::VectorXd& mean,
                                                          Rng& rng) const {
  const Eigen::VectorXd std = clamped_std();
  Eigen::VectorXd action(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    action(i) = mean(i) + std(i) * rng.normal();
  }
  Eigen::VectorXd lp = log_prob(mean, action);
  return {action, lp(0)};
}

Eigen::VectorXd GaussianPolicy::log_prob(const Eigen::MatrixXd& means,
                                         const Eigen::MatrixXd& actions) const {
  if (means.rows() != log_std_.size() || actions.rows() != log_std_.size() ||
      means.cols() != actions.cols()) {
    throw std::invalid_argument("GaussianPolicy::log_prob: shape mismatch");
  }
  const Eigen::ArrayXd log_std = log_std_.array().max(kLogStdMin).min(kLogStdMax);
  const Eigen::ArrayXd inv_var = (-2.0 * log_std).exp();

  const Eigen::ArrayXXd diff = (actions - means).array();
  Eigen::VectorXd out(means.cols());
  const double const_term =
      -0.5 * static_cast<double>(log_std_.size()) * kLog2Pi - log_std.sum();
  for (Eigen::Index t = 0; t < means.cols(); ++t) {
    out(t) = const_term - 0.5 * (diff.col(t).square() * inv_var).sum();
  }
  return out;
}

double GaussianPolicy::entropy() const {
  const Eigen::ArrayXd log_std = log_std_.array().max(kLogStdMin).min(kLogStdMax);
  return (0.5 * (1.0 + kLog2Pi)) * static_cast<double>(log_std_.size()) + log_std.sum();
}

Eigen::MatrixXd GaussianPolicy::log_prob_backward(const Eigen::MatrixXd& means,
                                                  const Eigen::MatrixXd& actions,
                                                  const Eigen::VectorXd& weights,
                                                  Eigen::VectorXd& log_std_grad) const {
  const Eigen::ArrayXd log_std = log_std_.array().max(kLogStdMin).min(kLogStdMax);
  const Eigen::ArrayXd inv_var = (-2.0 * log_std).exp();

  const Eigen::ArrayXXd diff = (actions - means).array();
  Eigen::MatrixXd mean_grad(means.rows(), means.cols());
  for (Eigen::Index t = 0; t < means.cols(); ++t) {
    mean_grad.col(t) = (weights(t) * diff.col(t) * inv_var).matrix();
    Eigen::ArrayXd per_dim = diff.col(t).square() * inv_var - 1.0;
    for (Eigen::Index i = 0; i < log_std_.size(); ++i) {
      if (log_std_(i) > kLogStdMin && log_std_(i) < kLogStdMax) {
        log_std_grad(i) += weights(t) * per_dim(i);
      }
    }
  }
  return mean_grad;
}

void GaussianPolicy::entropy_backward(double weight, Eigen::VectorXd& log_std_grad) const {
  for (Eigen::Index i = 0; i < log_std_.size(); ++i) {
    if (log_std_(i) > kLogStdMin && log_std_(i) < kLogStdMax) {
      log_std_grad(i) += weight;
    }
  }
}

std::pair<double, double> GaussianPolicy::log_prob_and_entropy(
    const Eigen::VectorXd& state, const Eigen::VectorXd& action) {
  const Eigen::MatrixXd mean = mean_net_.forward(state);
  Eigen::VectorXd lp = log_prob(mean, action);
  return {lp(0), entropy()};
}

}  // namespace sauna
