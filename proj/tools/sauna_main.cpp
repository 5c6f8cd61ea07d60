// Command-line front end; links only the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sauna/sauna_c.h"

namespace {

int exit_code(sauna_status status) {
  switch (status) {
    case SAUNA_OK: return 0;
    case SAUNA_ERR_SEEDS_FAILED: return 1;
    case SAUNA_ERR_INVALID_ARGUMENT: return 2;
    case SAUNA_ERR_IO: return 3;
    default: return 4;
  }
}

int finish(sauna_status status) {
  if (status != SAUNA_OK) {
    std::fprintf(stderr, "error: %s\n", sauna_last_error());
  }
  return exit_code(status);
}

struct ConfigHandle {
  sauna_config* ptr = nullptr;
  ConfigHandle() { sauna_config_create(&ptr); }
  ~ConfigHandle() { sauna_config_destroy(ptr); }
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
};

sauna_status apply_sets(sauna_config* cfg, const std::vector<std::string>& sets) {
  for (const auto& assignment : sets) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n",
                   assignment.c_str());
      return SAUNA_ERR_INVALID_ARGUMENT;
    }
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    const sauna_status st = sauna_config_set(cfg, key.c_str(), value.c_str());
    if (st != SAUNA_OK) return st;
  }
  return SAUNA_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sauna: filtered-sampling policy gradient experiments"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "run one experiment (all seeds)");
  std::string train_config;
  std::vector<std::string> train_sets;
  std::string train_out;
  train->add_option("--config", train_config, "config file (key = value lines)");
  train->add_option("--set", train_sets, "override, e.g. --set rho=0.3")
      ->take_all();
  train->add_option("--out", train_out, "output directory (overrides output_dir)");

  // compare
  auto* compare = app.add_subcommand("compare", "compare final performance of two runs");
  std::string dir_a, dir_b, compare_out;
  compare->add_option("dir_a", dir_a, "baseline run directory")->required();
  compare->add_option("dir_b", dir_b, "candidate run directory")->required();
  compare->add_option("--out", compare_out, "write the table here instead of stdout");

  // export
  auto* export_cmd = app.add_subcommand("export", "export plot data for one metric");
  std::string metric, export_out = ".";
  std::vector<std::string> export_dirs;
  export_cmd->add_option("--metric", metric, "metric column name")->required();
  export_cmd->add_option("--out", export_out, "output directory (default .)");
  export_cmd->add_option("dirs", export_dirs, "run directories")->required();

  // suite
  auto* suite = app.add_subcommand("suite", "run a built-in experiment suite");
  std::string suite_name, suite_out;
  std::vector<std::string> suite_sets;
  suite->add_option("name", suite_name, "suite name (paper-suite)")->required();
  suite->add_option("--out", suite_out, "output directory")->required();
  suite->add_option("--set", suite_sets, "config override applied to every run")
      ->take_all();

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    ConfigHandle cfg;
    if (!train_config.empty()) {
      const sauna_status st = sauna_config_load(cfg.ptr, train_config.c_str());
      if (st != SAUNA_OK) return finish(st);
    }
    const sauna_status st = apply_sets(cfg.ptr, train_sets);
    if (st != SAUNA_OK) return finish(st);
    return finish(sauna_run_experiment(
        cfg.ptr, train_out.empty() ? nullptr : train_out.c_str()));
  }

  if (compare->parsed()) {
    return finish(sauna_compare(dir_a.c_str(), dir_b.c_str(),
                                compare_out.empty() ? nullptr : compare_out.c_str()));
  }

  if (export_cmd->parsed()) {
    std::vector<const char*> dirs;
    for (const auto& d : export_dirs) dirs.push_back(d.c_str());
    return finish(sauna_export_metric(dirs.data(), dirs.size(), metric.c_str(),
                                      export_out.c_str()));
  }

  if (suite->parsed()) {
    ConfigHandle cfg;
    const sauna_status st = apply_sets(cfg.ptr, suite_sets);
    if (st != SAUNA_OK) return finish(st);
    return finish(sauna_run_suite(suite_name.c_str(), suite_out.c_str(), cfg.ptr));
  }

  return 2;
}
