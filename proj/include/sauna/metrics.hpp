#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace sauna {

// One row per gradient update. Step counters are cumulative and count
// visited transitions separately from accepted ones: rejected samples still
// cost environment interaction. Wall-clock time is persisted in a separate
// timing file so metrics files stay byte-reproducible.
struct MetricsRecord {
  long update_index = 0;       // 1-based
  long env_steps_visited = 0;  // cumulative, includes rejected transitions
  long env_steps_accepted = 0; // cumulative accepted (horizon per update)
  double ep_return_mean = std::nan("");  // training episodes this collection
  double ep_return_std = std::nan("");
  long episodes = 0;                     // completed during this collection
  double vex_b = std::nan("");           // batch fraction of variance explained
  double rejection_fraction = 0.0;
  double grad_l1_first_layer = std::nan("");
  double grad_l1_last_layer = std::nan("");
  double loss_surrogate = std::nan("");
  double loss_value = std::nan("");
  double loss_vex = std::nan("");
  double entropy = std::nan("");
  double approx_kl = std::nan("");
  double eval_return_mean = std::nan("");  // filled on evaluation updates
  double wall_clock_ms = 0.0;              // timing file only
};

// Frozen metrics CSV schema (golden-file tested).
const std::vector<std::string>& metrics_columns();

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsRecord>& records);
void write_timing_csv(const std::string& path,
                      const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> read_metrics_csv(const std::string& path);

}  // namespace sauna
