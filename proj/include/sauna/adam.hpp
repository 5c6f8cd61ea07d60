#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "sauna/params.hpp"

namespace sauna {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction over a fixed flat parameter layout. The spans
// passed to step() must match the layout the optimizer was created with
// (same order, same sizes).
class Adam {
 public:
  Adam(std::size_t param_count, AdamConfig cfg = {});

  // Applies one update. If any gradient entry is non-finite the update is
  // rejected: parameters, moments, and the step count are left untouched and
  // false is returned.
  bool step(const ParamSpans& params, const ParamSpans& grads);

  long step_count() const { return step_count_; }
  const AdamConfig& config() const { return cfg_; }
  void set_learning_rate(double lr) { cfg_.learning_rate = lr; }

 private:
  AdamConfig cfg_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  long step_count_ = 0;
};

}  // namespace sauna
