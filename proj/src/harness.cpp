#include "sauna/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include "sauna/csv.hpp"
#include "sauna/metrics.hpp"

namespace sauna {

namespace fs = std::filesystem;

namespace {

std::string seed_file(const std::string& stem, std::uint64_t seed,
                      const std::string& ext) {
  return stem + "_seed_" + std::to_string(seed) + ext;
}

// Per-update rejection fractions of a finished run, used as the replayed
// schedule for random_filter.
std::vector<double> load_rejection_schedule(const std::string& run_dir,
                                            std::uint64_t seed) {
  const std::string path =
      (fs::path(run_dir) / seed_file("metrics", seed, ".csv")).string();
  if (!fs::exists(path)) {
    throw std::runtime_error(
        "random_filter: no paired metrics for seed " + std::to_string(seed) +
        " under " + run_dir);
  }
  std::vector<double> schedule;
  for (const auto& rec : read_metrics_csv(path)) {
    schedule.push_back(rec.rejection_fraction);
  }
  return schedule;
}

struct SeedOutcome {
  SeedStatus status;
  std::vector<MetricsRecord> records;
};

SeedOutcome run_one_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                         const std::string& out_dir) {
  SeedOutcome outcome;
  outcome.status.seed = seed;
  try {
    AgentOptions opts = cfg.agent_options(seed);
    if (opts.variant == Variant::random_filter &&
        !cfg.random_filter_schedule_dir.empty()) {
      opts.random_filter_schedule =
          load_rejection_schedule(cfg.random_filter_schedule_dir, seed);
    }
    Agent agent(opts);
    outcome.records = agent.train();
    write_metrics_csv(
        (fs::path(out_dir) / seed_file("metrics", seed, ".csv")).string(),
        outcome.records);
    write_timing_csv(
        (fs::path(out_dir) / seed_file("timing", seed, ".csv")).string(),
        outcome.records);
    agent.save_checkpoint(
        (fs::path(out_dir) / seed_file("checkpoint", seed, ".bin")).string());
    outcome.status.ok = true;
  } catch (const std::exception& e) {
    outcome.status.ok = false;
    outcome.status.message = e.what();
  }
  return outcome;
}

// Sample standard deviation (n - 1); zero for a single value.
double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

void write_summary(const std::string& out_dir,
                   const std::vector<SeedOutcome>& outcomes) {
  // Align evaluation checkpoints by update index across the seeds that
  // completed; sample std matches recomputing from the per-seed files.
  std::map<long, std::vector<std::pair<double, double>>> by_update;  // (steps, eval)
  int ok = 0;
  for (const auto& o : outcomes) {
    if (!o.status.ok) continue;
    ++ok;
    for (const auto& rec : o.records) {
      if (!std::isnan(rec.eval_return_mean)) {
        by_update[rec.update_index].push_back(
            {static_cast<double>(rec.env_steps_visited), rec.eval_return_mean});
      }
    }
  }

  csv::Table table;
  table.header = {"update_index", "env_steps_visited_mean", "eval_return_mean",
                  "eval_return_std", "n_seeds"};
  for (const auto& [update, entries] : by_update) {
    if (static_cast<int>(entries.size()) != ok) continue;  // not shared by all
    double steps_mean = 0.0, eval_mean = 0.0;
    std::vector<double> evals;
    for (const auto& [steps, eval] : entries) {
      steps_mean += steps;
      eval_mean += eval;
      evals.push_back(eval);
    }
    steps_mean /= static_cast<double>(entries.size());
    eval_mean /= static_cast<double>(entries.size());
    table.rows.push_back({std::to_string(update), csv::format_double(steps_mean),
                          csv::format_double(eval_mean),
                          csv::format_double(sample_std(evals, eval_mean)),
                          std::to_string(entries.size())});
  }
  csv::write_file((fs::path(out_dir) / "summary.csv").string(), table);
}

void write_status(const std::string& out_dir, const std::vector<SeedOutcome>& outcomes) {
  csv::Table table;
  table.header = {"seed", "status", "message"};
  for (const auto& o : outcomes) {
    table.rows.push_back({std::to_string(o.status.seed),
                          o.status.ok ? "ok" : "aborted", o.status.message});
  }
  csv::write_file((fs::path(out_dir) / "run_status.csv").string(), table);
}

ExperimentConfig load_run_config(const std::string& run_dir) {
  ExperimentConfig cfg;
  cfg.load_file((fs::path(run_dir) / "config.txt").string());
  return cfg;
}

bool is_run_dir(const std::string& dir) {
  return fs::exists(fs::path(dir) / "summary.csv") &&
         fs::exists(fs::path(dir) / "config.txt");
}

std::vector<std::string> resolve_run_dirs(const std::string& dir) {
  if (is_run_dir(dir)) return {dir};
  std::vector<std::string> out;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() && is_run_dir(entry.path().string())) {
        out.push_back(entry.path().string());
      }
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) {
    throw std::invalid_argument("no run directories found under: " + dir);
  }
  return out;
}

struct FinalPerformance {
  double mean = 0.0;
  double std_dev = 0.0;
};

FinalPerformance final_performance(const std::string& run_dir) {
  const csv::Table summary =
      csv::read_file((fs::path(run_dir) / "summary.csv").string());
  if (summary.rows.empty()) {
    throw std::runtime_error("empty summary in " + run_dir);
  }
  const int mean_col = summary.column("eval_return_mean");
  const int std_col = summary.column("eval_return_std");
  const std::size_t last = summary.rows.size() - 1;
  return {summary.number(last, mean_col), summary.number(last, std_col)};
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.output_dir.empty()) {
    throw std::invalid_argument("run_experiment: output_dir must be set");
  }
  fs::create_directories(config.output_dir);

  const std::uint64_t offset = seed_offset_from_env();

  {
    std::ofstream out(fs::path(config.output_dir) / "config.txt",
                      std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write config archive under " +
                               config.output_dir);
    }
    out << config.to_text();
    if (offset != 0) {
      out << "# effective seed offset: " << offset << "\n";
    }
  }

  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s : config.seeds) seeds.push_back(s + offset);

  int workers = config.parallel_seeds > 0
                    ? config.parallel_seeds
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(seeds.size())));

  std::vector<SeedOutcome> outcomes(seeds.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= seeds.size()) break;
        outcomes[i] = run_one_seed(config, seeds[i], config.output_dir);
      }
    });
  }
  for (auto& t : pool) t.join();

  write_summary(config.output_dir, outcomes);
  write_status(config.output_dir, outcomes);

  RunResult result;
  result.output_dir = config.output_dir;
  for (const auto& o : outcomes) {
    result.seeds.push_back(o.status);
    if (!o.status.ok) {
      std::cerr << "[sauna] seed " << o.status.seed << " aborted: "
                << o.status.message << "\n";
    }
  }
  return result;
}

std::vector<ComparisonRow> compare_runs(const std::string& dir_a,
                                        const std::string& dir_b) {
  const auto runs_a = resolve_run_dirs(dir_a);
  const auto runs_b = resolve_run_dirs(dir_b);

  std::map<std::string, std::string> by_env_b;
  for (const auto& run : runs_b) {
    by_env_b[load_run_config(run).env] = run;
  }

  std::vector<ComparisonRow> rows;
  for (const auto& run_a : runs_a) {
    const ExperimentConfig cfg_a = load_run_config(run_a);
    const auto it = by_env_b.find(cfg_a.env);
    if (it == by_env_b.end()) continue;
    const ExperimentConfig cfg_b = load_run_config(it->second);
    if (cfg_a.total_steps != cfg_b.total_steps ||
        cfg_a.hyper.horizon != cfg_b.hyper.horizon) {
      throw std::invalid_argument("compare: runs for env '" + cfg_a.env +
                                  "' have mismatched step schedules");
    }
    const FinalPerformance a = final_performance(run_a);
    const FinalPerformance b = final_performance(it->second);

    ComparisonRow row;
    row.env = cfg_a.env;
    row.variant_a = cfg_a.variant;
    row.variant_b = cfg_b.variant;
    row.final_mean_a = a.mean;
    row.final_std_a = a.std_dev;
    row.final_mean_b = b.mean;
    row.final_std_b = b.std_dev;
    if (a.mean == b.mean) {
      row.improvement_pct = 0.0;
    } else {
      row.improvement_pct = (b.mean - a.mean) / std::max(std::abs(a.mean), 1e-12) * 100.0;
    }
    rows.push_back(row);
  }
  if (rows.empty()) {
    throw std::invalid_argument("compare: no matching environments between '" +
                                dir_a + "' and '" + dir_b + "'");
  }
  return rows;
}

void write_comparison(const std::vector<ComparisonRow>& rows,
                      const std::string& out_path) {
  csv::Table table;
  table.header = {"env",          "variant_a",    "variant_b",
                  "final_mean_a", "final_std_a",  "final_mean_b",
                  "final_std_b",  "improvement_pct"};
  for (const auto& r : rows) {
    table.rows.push_back({r.env, r.variant_a, r.variant_b,
                          csv::format_double(r.final_mean_a),
                          csv::format_double(r.final_std_a),
                          csv::format_double(r.final_mean_b),
                          csv::format_double(r.final_std_b),
                          csv::format_double(r.improvement_pct)});
  }
  if (out_path.empty()) {
    csv::write_row(std::cout, table.header);
    for (const auto& row : table.rows) csv::write_row(std::cout, row);
  } else {
    csv::write_file(out_path, table);
  }
}

void export_plotdata(const std::vector<std::string>& run_dirs,
                     const std::string& metric, const std::string& out_dir) {
  const auto& columns = metrics_columns();
  if (std::find(columns.begin(), columns.end(), metric) == columns.end() ||
      metric == "update_index") {
    std::string available;
    for (const auto& c : columns) {
      if (c == "update_index") continue;
      available += (available.empty() ? "" : ", ") + c;
    }
    throw std::invalid_argument("unknown metric '" + metric +
                                "' (available: " + available + ")");
  }
  fs::create_directories(out_dir);

  csv::Table long_table;
  long_table.header = {"steps", "variant", "seed", "value"};
  csv::Table mean_table;
  mean_table.header = {"steps", "variant", "mean", "std"};

  for (const auto& dir : run_dirs) {
    for (const auto& run : resolve_run_dirs(dir)) {
      const ExperimentConfig cfg = load_run_config(run);
      std::vector<std::string> metric_files;
      for (const auto& entry : fs::directory_iterator(run)) {
        if (entry.path().filename().string().rfind("metrics_seed_", 0) == 0) {
          metric_files.push_back(entry.path().string());
        }
      }
      std::sort(metric_files.begin(), metric_files.end());
      // (update index) -> samples of (steps, value) across seeds
      std::map<long, std::vector<std::pair<double, double>>> grouped;
      for (const auto& path : metric_files) {
        const std::string name = fs::path(path).filename().string();
        const std::string seed_str =
            name.substr(std::string("metrics_seed_").size(),
                        name.size() - std::string("metrics_seed_").size() - 4);
        const csv::Table t = csv::read_file(path);
        const int metric_col = t.column(metric);
        const int steps_col = t.column("env_steps_visited");
        const int update_col = t.column("update_index");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
          const double value = t.number(i, metric_col);
          if (std::isnan(value)) continue;
          const double steps = t.number(i, steps_col);
          long_table.rows.push_back({csv::format_double(steps), cfg.variant,
                                     seed_str, csv::format_double(value)});
          grouped[static_cast<long>(t.number(i, update_col))].push_back({steps, value});
        }
      }
      for (const auto& [update, samples] : grouped) {
        double steps_mean = 0.0, mean = 0.0;
        std::vector<double> values;
        for (const auto& [steps, value] : samples) {
          steps_mean += steps;
          mean += value;
          values.push_back(value);
        }
        steps_mean /= static_cast<double>(samples.size());
        mean /= static_cast<double>(samples.size());
        mean_table.rows.push_back({csv::format_double(steps_mean), cfg.variant,
                                   csv::format_double(mean),
                                   csv::format_double(sample_std(values, mean))});
      }
    }
  }

  csv::write_file((fs::path(out_dir) / ("export_" + metric + "_long.csv")).string(),
                  long_table);
  csv::write_file((fs::path(out_dir) / ("export_" + metric + "_mean.csv")).string(),
                  mean_table);
}

std::vector<RunResult> run_suite_paper(const ExperimentConfig& base,
                                       const std::string& out_dir) {
  // sauna runs first so random_filter can replay its rejection schedule.
  const std::vector<std::string> variants = {"sauna", "ppo_baseline",
                                             "no_filter_aux", "random_filter"};
  std::vector<RunResult> results;
  for (const auto& env : env_names()) {
    const std::string sauna_dir =
        (fs::path(out_dir) / (env + "_sauna")).string();
    for (const auto& variant : variants) {
      ExperimentConfig cfg = base;
      cfg.env = env;
      cfg.variant = variant;
      cfg.output_dir = (fs::path(out_dir) / (env + "_" + variant)).string();
      if (variant == "random_filter") {
        cfg.random_filter_schedule_dir = sauna_dir;
      }
      results.push_back(run_experiment(cfg));
    }
  }
  return results;
}

}  // namespace sauna
