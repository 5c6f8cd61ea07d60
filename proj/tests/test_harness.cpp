#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "sauna/config.hpp"
#include "sauna/csv.hpp"
#include "sauna/harness.hpp"
#include "sauna/metrics.hpp"

using namespace sauna;
namespace fs = std::filesystem;

namespace {

// Minimal config that trains in a fraction of a second per seed.
ExperimentConfig tiny_config(const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.env = "pendulum";
  cfg.variant = "sauna";
  cfg.seeds = {1};
  cfg.hyper.horizon = 128;
  cfg.hyper.minibatch_size = 64;
  cfg.hyper.epochs = 2;
  cfg.hidden_sizes = {8, 8};
  cfg.total_steps = 128;
  cfg.eval_every = 1;
  cfg.eval_episodes = 2;
  cfg.output_dir = out_dir;
  return cfg;
}

std::string temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// A fabricated run directory with known summary values.
void write_fixture_run(const std::string& dir, const std::string& env,
                       const std::string& variant, double final_mean,
                       double final_std) {
  fs::create_directories(dir);
  ExperimentConfig cfg;
  cfg.env = env;
  cfg.variant = variant;
  cfg.output_dir = dir;
  std::ofstream(fs::path(dir) / "config.txt") << cfg.to_text();
  csv::Table summary;
  summary.header = {"update_index", "env_steps_visited_mean", "eval_return_mean",
                    "eval_return_std", "n_seeds"};
  summary.rows.push_back({"10", "20480", csv::format_double(final_mean - 5),
                          csv::format_double(final_std), "6"});
  summary.rows.push_back({"20", "40960", csv::format_double(final_mean),
                          csv::format_double(final_std), "6"});
  csv::write_file((fs::path(dir) / "summary.csv").string(), summary);
}

}  // namespace

TEST_CASE("paper defaults are asserted in the configuration") {
  ExperimentConfig cfg;
  CHECK(cfg.hyper.rho == 0.3);
  CHECK(cfg.hyper.epsilon0 == 1e-8);
  CHECK(cfg.hyper.c2 == 0.5);
  CHECK(cfg.hyper.c1 == 0.5);
  CHECK(cfg.hyper.clip == 0.2);
  CHECK(cfg.hyper.gamma == 0.99);
  CHECK(cfg.hyper.lambda == 0.95);
  CHECK(cfg.hyper.epochs == 10);
  CHECK(cfg.hyper.minibatch_size == 64);
  CHECK(cfg.hyper.horizon == 2048);
  CHECK(cfg.hyper.learning_rate == 3e-4);
  CHECK(cfg.hyper.max_grad_norm == 0.5);
  CHECK(cfg.hyper.entropy_coef == 0.0);
  CHECK(cfg.seeds.size() == 6);
  CHECK(cfg.hidden_sizes == std::vector<int>{64, 64});
  CHECK(cfg.normalize_observations);
  CHECK_FALSE(cfg.shared_policy_trunk);
}

TEST_CASE("config file parsing, overrides, and archival round trip") {
  const std::string dir = temp_dir("sauna_cfg_test");
  const std::string path = dir + "/run.cfg";
  std::ofstream(path) << "# comment line\n"
                      << "env = pointmass\n"
                      << "rho = 0.7   # trailing comment\n"
                      << "seeds = 3, 4 ,5\n"
                      << "\n"
                      << "normalize_observations = off\n";
  ExperimentConfig cfg;
  cfg.load_file(path);
  CHECK(cfg.env == "pointmass");
  CHECK(cfg.hyper.rho == 0.7);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4, 5});
  CHECK_FALSE(cfg.normalize_observations);

  cfg.apply_override("rho=0.1");
  CHECK(cfg.hyper.rho == 0.1);
  CHECK_THROWS_AS(cfg.apply_override("rho"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("not_a_key", "1"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("rho", "fast"), std::invalid_argument);

  // Archival text reloads to the same values.
  const std::string text = cfg.to_text();
  const std::string archived = dir + "/archived.cfg";
  std::ofstream(archived) << text;
  ExperimentConfig reloaded;
  reloaded.load_file(archived);
  CHECK(reloaded.to_text() == text);
}

TEST_CASE("metrics CSV schema is frozen (golden header)") {
  const std::string golden =
      "update_index,env_steps_visited,env_steps_accepted,ep_return_mean,"
      "ep_return_std,episodes,vex_b,rejection_fraction,grad_l1_first_layer,"
      "grad_l1_last_layer,loss_surrogate,loss_value,loss_vex,entropy,"
      "approx_kl,eval_return_mean";
  std::string joined;
  for (const auto& c : metrics_columns()) {
    if (!joined.empty()) joined += ",";
    joined += c;
  }
  CHECK(joined == golden);
}

TEST_CASE("run_experiment writes the complete file set with valid CSV") {
  const std::string dir = temp_dir("sauna_run_test");
  const RunResult result = run_experiment(tiny_config(dir));
  CHECK(result.all_ok());
  CHECK(fs::exists(fs::path(dir) / "config.txt"));
  CHECK(fs::exists(fs::path(dir) / "metrics_seed_1.csv"));
  CHECK(fs::exists(fs::path(dir) / "timing_seed_1.csv"));
  CHECK(fs::exists(fs::path(dir) / "checkpoint_seed_1.bin"));
  CHECK(fs::exists(fs::path(dir) / "summary.csv"));
  CHECK(fs::exists(fs::path(dir) / "run_status.csv"));

  const auto records = read_metrics_csv((fs::path(dir) / "metrics_seed_1.csv").string());
  REQUIRE(records.size() >= 1);
  CHECK(records[0].update_index == 1);

  // RFC-4180: CRLF line endings, header row first.
  const std::string raw = read_file((fs::path(dir) / "metrics_seed_1.csv").string());
  CHECK(raw.find("\r\n") != std::string::npos);
  CHECK(raw.rfind("update_index,", 0) == 0);
}

TEST_CASE("env steps strictly increase across records") {
  const std::string dir = temp_dir("sauna_steps_test");
  ExperimentConfig cfg = tiny_config(dir);
  cfg.total_steps = 128 * 4;
  run_experiment(cfg);
  const auto records = read_metrics_csv((fs::path(dir) / "metrics_seed_1.csv").string());
  REQUIRE(records.size() >= 2);
  for (std::size_t i = 1; i < records.size(); ++i) {
    CHECK(records[i].env_steps_visited > records[i - 1].env_steps_visited);
  }
}

TEST_CASE("summary statistics match a hand recomputation from the per-seed files") {
  const std::string dir = temp_dir("sauna_summary_test");
  ExperimentConfig cfg = tiny_config(dir);
  cfg.seeds = {1, 2, 3, 4, 5, 6};
  run_experiment(cfg);

  const csv::Table summary = csv::read_file((fs::path(dir) / "summary.csv").string());
  REQUIRE(summary.rows.size() >= 1);
  const int idx_col = summary.column("update_index");
  const int mean_col = summary.column("eval_return_mean");
  const int std_col = summary.column("eval_return_std");
  const int n_col = summary.column("n_seeds");

  for (std::size_t row = 0; row < summary.rows.size(); ++row) {
    const long update = static_cast<long>(summary.number(row, idx_col));
    std::vector<double> evals;
    for (std::uint64_t seed : cfg.seeds) {
      const auto records = read_metrics_csv(
          (fs::path(dir) / ("metrics_seed_" + std::to_string(seed) + ".csv")).string());
      for (const auto& rec : records) {
        if (rec.update_index == update && !std::isnan(rec.eval_return_mean)) {
          evals.push_back(rec.eval_return_mean);
        }
      }
    }
    REQUIRE(evals.size() == 6);
    double mean = 0.0;
    for (double v : evals) mean += v;
    mean /= 6.0;
    double var = 0.0;
    for (double v : evals) var += (v - mean) * (v - mean);
    const double sample_std = std::sqrt(var / 5.0);
    CHECK(std::abs(summary.number(row, mean_col) - mean) < 1e-9);
    CHECK(std::abs(summary.number(row, std_col) - sample_std) < 1e-9);
    CHECK(summary.number(row, n_col) == 6);
  }
}

TEST_CASE("rerunning an identical config reproduces every artifact byte for byte") {
  const std::string dir_a = temp_dir("sauna_det_a");
  const std::string dir_b = temp_dir("sauna_det_b");
  ExperimentConfig cfg = tiny_config(dir_a);
  cfg.seeds = {1, 2};
  cfg.total_steps = 128 * 2;
  run_experiment(cfg);
  cfg.output_dir = dir_b;
  run_experiment(cfg);

  for (const char* name : {"metrics_seed_1.csv", "metrics_seed_2.csv", "summary.csv"}) {
    CHECK(read_file((fs::path(dir_a) / name).string()) ==
          read_file((fs::path(dir_b) / name).string()));
  }
}

TEST_CASE("SAUNA_SEED_OFFSET shifts every seed") {
  const std::string dir = temp_dir("sauna_offset_test");
  setenv("SAUNA_SEED_OFFSET", "100", 1);
  ExperimentConfig cfg = tiny_config(dir);
  const RunResult result = run_experiment(cfg);
  unsetenv("SAUNA_SEED_OFFSET");
  REQUIRE(result.seeds.size() == 1);
  CHECK(result.seeds[0].seed == 101);
  CHECK(fs::exists(fs::path(dir) / "metrics_seed_101.csv"));
  // The offset is also recorded next to the archived config.
  const std::string archived = read_file((fs::path(dir) / "config.txt").string());
  CHECK(archived.find("seed offset: 100") != std::string::npos);
}

TEST_CASE("compare: a run against itself reports zero improvement") {
  const std::string dir = temp_dir("sauna_cmp_self");
  run_experiment(tiny_config(dir));
  const auto rows = compare_runs(dir, dir);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].env == "pendulum");
  CHECK(rows[0].improvement_pct == 0.0);
  CHECK(rows[0].final_mean_a == rows[0].final_mean_b);
}

TEST_CASE("compare: fixture runs produce the exact expected table") {
  const std::string a = temp_dir("sauna_cmp_a");
  const std::string b = temp_dir("sauna_cmp_b");
  write_fixture_run(a, "pendulum", "ppo_baseline", -400.0, 25.0);
  write_fixture_run(b, "pendulum", "sauna", -300.0, 20.0);
  const auto rows = compare_runs(a, b);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].variant_a == "ppo_baseline");
  CHECK(rows[0].variant_b == "sauna");
  CHECK(rows[0].final_mean_a == -400.0);
  CHECK(rows[0].final_mean_b == -300.0);
  CHECK(rows[0].final_std_b == 20.0);
  CHECK(rows[0].improvement_pct == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("compare: mismatched step schedules are a usage error") {
  const std::string a = temp_dir("sauna_cmp_mis_a");
  const std::string b = temp_dir("sauna_cmp_mis_b");
  write_fixture_run(a, "pendulum", "ppo_baseline", -400.0, 25.0);
  write_fixture_run(b, "pendulum", "sauna", -300.0, 20.0);
  ExperimentConfig cfg;
  cfg.env = "pendulum";
  cfg.variant = "sauna";
  cfg.total_steps = 999424;
  std::ofstream(fs::path(b) / "config.txt") << cfg.to_text();
  CHECK_THROWS_AS(compare_runs(a, b), std::invalid_argument);
}

TEST_CASE("compare: a missing directory is a clear error") {
  CHECK_THROWS(compare_runs("/nonexistent/sauna/run", "/another/missing"));
}

TEST_CASE("export: known metric produces long and mean files; unknown lists metrics") {
  const std::string dir = temp_dir("sauna_export_run");
  ExperimentConfig cfg = tiny_config(dir);
  cfg.seeds = {1, 2};
  run_experiment(cfg);

  const std::string out = temp_dir("sauna_export_out");
  export_plotdata({dir}, "rejection_fraction", out);
  const csv::Table long_table =
      csv::read_file((fs::path(out) / "export_rejection_fraction_long.csv").string());
  CHECK(long_table.header ==
        std::vector<std::string>{"steps", "variant", "seed", "value"});
  CHECK(long_table.rows.size() == 2);  // one update per seed
  const csv::Table mean_table =
      csv::read_file((fs::path(out) / "export_rejection_fraction_mean.csv").string());
  CHECK(mean_table.header == std::vector<std::string>{"steps", "variant", "mean", "std"});
  REQUIRE(mean_table.rows.size() == 1);

  // Single update across two seeds: mean of the two values, sample std.
  try {
    export_plotdata({dir}, "not_a_metric", out);
    FAIL("expected an error for the unknown metric");
  } catch (const std::invalid_argument& e) {
    const std::string message = e.what();
    CHECK(message.find("vex_b") != std::string::npos);  // lists available metrics
  }
}

TEST_CASE("export: rejection fraction of a baseline run is an all-zero series") {
  const std::string dir = temp_dir("sauna_export_baseline");
  ExperimentConfig cfg = tiny_config(dir);
  cfg.variant = "ppo_baseline";
  cfg.total_steps = 128 * 3;
  run_experiment(cfg);
  const std::string out = temp_dir("sauna_export_baseline_out");
  export_plotdata({dir}, "rejection_fraction", out);
  const csv::Table long_table =
      csv::read_file((fs::path(out) / "export_rejection_fraction_long.csv").string());
  REQUIRE(long_table.rows.size() == 3);
  for (std::size_t i = 0; i < long_table.rows.size(); ++i) {
    CHECK(long_table.number(i, 3) == 0.0);
  }
}

TEST_CASE("export: single-row groups get std 0") {
  const std::string dir = temp_dir("sauna_export_single");
  run_experiment(tiny_config(dir));  // one seed, one update
  const std::string out = temp_dir("sauna_export_single_out");
  export_plotdata({dir}, "vex_b", out);
  const csv::Table mean_table =
      csv::read_file((fs::path(out) / "export_vex_b_mean.csv").string());
  REQUIRE(mean_table.rows.size() == 1);
  CHECK(mean_table.number(0, 3) == 0.0);
  CHECK(mean_table.number(0, 2) ==
        csv::parse_double(mean_table.rows[0][2]));  // mean = the single value
}

TEST_CASE("csv escaping and parsing round trip") {
  csv::Table table;
  table.header = {"a", "b"};
  table.rows.push_back({"plain", "needs,\"quoting\"\nhere"});
  const std::string path =
      (fs::temp_directory_path() / "sauna_csv_roundtrip.csv").string();
  csv::write_file(path, table);
  const csv::Table back = csv::read_file(path);
  CHECK(back.header == table.header);
  REQUIRE(back.rows.size() == 1);
  CHECK(back.rows[0][1] == table.rows[0][1]);
  fs::remove(path);
}

TEST_CASE("format_double round trips exactly and maps NaN to empty") {
  CHECK(csv::format_double(std::nan("")) == "");
  CHECK(std::isnan(csv::parse_double("")));
  for (double v : {0.1, -123.456789, 1e-300, 3.0, -250.0}) {
    CHECK(csv::parse_double(csv::format_double(v)) == v);
  }
}
