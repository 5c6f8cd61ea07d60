#include "sauna/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace sauna {

Adam::Adam(std::size_t param_count, AdamConfig cfg)
    : cfg_(cfg),
      m_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(param_count))),
      v_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(param_count))) {}

bool Adam::step(const ParamSpans& params, const ParamSpans& grads) {
  if (total_size(params) != static_cast<std::size_t>(m_.size()) ||
      total_size(grads) != static_cast<std::size_t>(m_.size())) {
    throw std::invalid_argument("Adam::step: span layout does not match optimizer state");
  }
  if (!all_finite(grads)) {
    return false;
  }

  ++step_count_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_count_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_count_));

  Eigen::Index offset = 0;
  for (std::size_t s = 0; s < params.size(); ++s) {
    double* p = params[s].data;
    const double* g = grads[s].data;
    for (std::size_t i = 0; i < params[s].size; ++i, ++offset) {
      m_(offset) = cfg_.beta1 * m_(offset) + (1.0 - cfg_.beta1) * g[i];
      v_(offset) = cfg_.beta2 * v_(offset) + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double m_hat = m_(offset) / bc1;
      const double v_hat = v_(offset) / bc2;
      p[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
    }
  }
  return true;
}

}  // namespace sauna
