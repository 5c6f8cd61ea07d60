#pragma once

#include <Eigen/Dense>

namespace sauna {

// Running per-dimension mean/variance normalization of observations
// (Welford). Statistics update during collection and are frozen at
// evaluation time by simply not calling update().
class ObsNormalizer {
 public:
  ObsNormalizer() = default;
  explicit ObsNormalizer(int dim, bool enabled = true);

  void update(const Eigen::VectorXd& raw);
  Eigen::VectorXd normalize(const Eigen::VectorXd& raw) const;

  bool enabled() const { return enabled_; }
  double count() const { return count_; }
  Eigen::VectorXd& mean() { return mean_; }
  Eigen::VectorXd& m2() { return m2_; }
  double* count_ptr() { return &count_; }

 private:
  bool enabled_ = false;
  double count_ = 0.0;
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
};

}  // namespace sauna
