#pragma once

#include <string>
#include <vector>

#include "sauna/config.hpp"

namespace sauna {

struct SeedStatus {
  std::uint64_t seed = 0;  // effective seed (offset applied)
  bool ok = false;
  std::string message;
};

struct RunResult {
  std::string output_dir;
  std::vector<SeedStatus> seeds;

  bool all_ok() const {
    for (const auto& s : seeds)
      if (!s.ok) return false;
    return !seeds.empty();
  }
};

// Runs one train() per seed (in parallel workers), writing into output_dir:
//   config.txt                archived configuration
//   metrics_seed_<s>.csv      one row per update (frozen schema)
//   timing_seed_<s>.csv       wall-clock per update
//   checkpoint_seed_<s>.bin   final parameters
//   summary.csv               cross-seed mean/std of evaluation returns
//   run_status.csv            per-seed completion status
// A seed that aborts is recorded in run_status.csv; the others complete.
RunResult run_experiment(const ExperimentConfig& config);

struct ComparisonRow {
  std::string env;
  std::string variant_a, variant_b;
  double final_mean_a = 0.0, final_std_a = 0.0;
  double final_mean_b = 0.0, final_std_b = 0.0;
  double improvement_pct = 0.0;  // of B over A
};

// Compares two runs (or two suite directories, matched per environment).
// Both sides must share the environment and step schedule.
std::vector<ComparisonRow> compare_runs(const std::string& dir_a,
                                        const std::string& dir_b);
// Renders the table as CSV; empty path writes to stdout.
void write_comparison(const std::vector<ComparisonRow>& rows,
                      const std::string& out_path);

// Long-format export of one metric across run directories:
//   <out_dir>/export_<metric>_long.csv  (steps, variant, seed, value)
//   <out_dir>/export_<metric>_mean.csv  (steps, variant, mean, std)
// Unknown metric names raise an error listing the available ones.
void export_plotdata(const std::vector<std::string>& run_dirs,
                     const std::string& metric, const std::string& out_dir);

// The built-in experiment suite: every environment x {ppo_baseline, sauna,
// no_filter_aux, random_filter} x the configured seeds, with random_filter
// paired to the finished sauna run of the same environment. Returns one
// RunResult per (env, variant) run.
std::vector<RunResult> run_suite_paper(const ExperimentConfig& base,
                                       const std::string& out_dir);

}  // namespace sauna
