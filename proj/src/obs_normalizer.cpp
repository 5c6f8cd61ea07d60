#include "sauna/obs_normalizer.hpp"

namespace sauna {

ObsNormalizer::ObsNormalizer(int dim, bool enabled)
    : enabled_(enabled),
      mean_(Eigen::VectorXd::Zero(dim)),
      m2_(Eigen::VectorXd::Zero(dim)) {}

void ObsNormalizer::update(const Eigen::VectorXd& raw) {
  if (!enabled_) return;
  count_ += 1.0;
  const Eigen::VectorXd delta = raw - mean_;
  mean_ += delta / count_;
  m2_ += delta.cwiseProduct(raw - mean_);
}

Eigen::VectorXd ObsNormalizer::normalize(const Eigen::VectorXd& raw) const {
  if (!enabled_ || count_ < 1.0) return raw;
  const Eigen::ArrayXd var = (m2_ / count_).array();
  Eigen::ArrayXd z = (raw - mean_).array() / (var + 1e-8).sqrt();
  return z.max(-10.0).min(10.0).matrix();
}

}  // namespace sauna
