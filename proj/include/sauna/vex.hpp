#pragma once

#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace sauna {

// Fraction of variance the value predictions explain about the observed
// returns: 1 - SSE/SST with SST = sum (R_t - mean(R))^2. At most 1; negative
// means the predictions are worse than predicting the mean. A degenerate
// batch (SST == 0, all returns equal) yields 1 when SSE == 0 and the capped
// sentinel -1 otherwise, with the degenerate flag set.
struct VexBatchStat {
  double vex_batch = 0.0;
  std::size_t sample_count = 0;
  double return_mean = 0.0;
  bool degenerate = false;
};

VexBatchStat vex_of_batch(std::span<const double> returns,
                          std::span<const double> values);

// Adjusted-R2 correction: 1 - (1 - vex) * (n - 1) / (n - p - 1).
// Requires n > p + 1.
double adjusted_vex(const VexBatchStat& stat, std::size_t n, std::size_t p);

// Exact streaming median over all inserted values (dual heap). Also keeps a
// running mean for the mean-statistic ablation. Empty queries return 0, the
// documented start-of-collection sentinel.
class MedianTracker {
 public:
  void insert(double value);
  double median() const;
  double mean() const;
  std::size_t size() const { return count_; }
  void clear();

 private:
  std::priority_queue<double> lower_;  // max-heap of the lower half
  std::priority_queue<double, std::vector<double>, std::greater<double>> upper_;
  std::size_t count_ = 0;
  double sum_ = 0.0;
};

// |vex_pred| / (|reference| + eps0): the standardized filter statistic.
double filter_ratio(double vex_pred, double reference, double eps0);

// Algorithm line-8 predicate: keep the transition iff the ratio against the
// running median clears rho. The caller inserts vex_pred into the tracker
// after the test, accepted or not.
bool accept_transition(double vex_pred, const MedianTracker& tracker, double rho,
                       double eps0);

}  // namespace sauna
