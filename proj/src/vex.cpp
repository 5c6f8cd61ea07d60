#include "sauna/vex.hpp"

#include <cmath>
#include <stdexcept>

namespace sauna {

VexBatchStat vex_of_batch(std::span<const double> returns,
                          std::span<const double> values) {
  if (returns.empty() || values.size() != returns.size()) {
    throw std::invalid_argument("vex_of_batch: inputs must be nonempty and equal length");
  }
  const std::size_t n = returns.size();

  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= static_cast<double>(n);

  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = returns[i] - values[i];
    const double d = returns[i] - mean;
    sse += e * e;
    sst += d * d;
  }

  VexBatchStat stat;
  stat.sample_count = n;
  stat.return_mean = mean;
  if (sst == 0.0) {
    stat.degenerate = true;
    stat.vex_batch = (sse == 0.0) ? 1.0 : -1.0;
  } else {
    stat.vex_batch = 1.0 - sse / sst;
  }
  return stat;
}

double adjusted_vex(const VexBatchStat& stat, std::size_t n, std::size_t p) {
  if (n <= p + 1) {
    throw std::invalid_argument("adjusted_vex: requires n > p + 1");
  }
  const double num = static_cast<double>(n - 1);
  const double den = static_cast<double>(n - p - 1);
  return 1.0 - (1.0 - stat.vex_batch) * num / den;
}

void MedianTracker::insert(double value) {
  if (lower_.empty() || value <= lower_.top()) {
    lower_.push(value);
  } else {
    upper_.push(value);
  }
  // Rebalance so lower_ holds the extra element on odd counts.
  if (lower_.size() > upper_.size() + 1) {
    upper_.push(lower_.top());
    lower_.pop();
  } else if (upper_.size() > lower_.size()) {
    lower_.push(upper_.top());
    upper_.pop();
  }
  ++count_;
  sum_ += value;
}

double MedianTracker::median() const {
  if (count_ == 0) return 0.0;
  if (lower_.size() > upper_.size()) return lower_.top();
  return (lower_.top() + upper_.top()) / 2.0;
}

double MedianTracker::mean() const {
  if (count_ == 0) return 0.0;
  return sum_ / static_cast<double>(count_);
}

void MedianTracker::clear() {
  lower_ = {};
  upper_ = {};
  count_ = 0;
  sum_ = 0.0;
}

double filter_ratio(double vex_pred, double reference, double eps0) {
  return std::abs(vex_pred) / (std::abs(reference) + eps0);
}

bool accept_transition(double vex_pred, const MedianTracker& tracker, double rho,
                       double eps0) {
  return filter_ratio(vex_pred, tracker.median(), eps0) >= rho;
}

}  // namespace sauna
