#include "sauna/sauna_c.h"

#include <cstring>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "sauna/config.hpp"
#include "sauna/harness.hpp"

struct sauna_config {
  sauna::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error = "";

sauna_status fail(sauna_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
sauna_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(SAUNA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SAUNA_ERR_IO, e.what());
  } catch (const std::runtime_error& e) {
    return fail(SAUNA_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(SAUNA_ERR_RUNTIME, e.what());
  }
}

}  // namespace

extern "C" {

const char* sauna_version(void) { return "1.0.0"; }

const char* sauna_last_error(void) { return g_last_error.c_str(); }

sauna_status sauna_config_create(sauna_config** out) {
  if (out == nullptr) return fail(SAUNA_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] {
    *out = new sauna_config();
    return SAUNA_OK;
  });
}

void sauna_config_destroy(sauna_config* config) { delete config; }

sauna_status sauna_config_load(sauna_config* config, const char* path) {
  if (config == nullptr || path == nullptr) {
    return fail(SAUNA_ERR_INVALID_ARGUMENT, "config/path is NULL");
  }
  return guarded([&] {
    config->cfg.load_file(path);
    return SAUNA_OK;
  });
}

sauna_status sauna_config_set(sauna_config* config, const char* key,
                              const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return fail(SAUNA_ERR_INVALID_ARGUMENT, "config/key/value is NULL");
  }
  return guarded([&] {
    config->cfg.set(key, value);
    return SAUNA_OK;
  });
}

sauna_status sauna_config_get(const sauna_config* config, const char* key,
                              char* buffer, size_t buffer_size) {
  if (config == nullptr || key == nullptr || buffer == nullptr || buffer_size == 0) {
    return fail(SAUNA_ERR_INVALID_ARGUMENT, "config/key/buffer is NULL or empty");
  }
  return guarded([&] {
    const std::string value = config->cfg.get(key);
    std::strncpy(buffer, value.c_str(), buffer_size - 1);
    buffer[buffer_size - 1] = '\0';
    return SAUNA_OK;
  });
}

sauna_status sauna_run_experiment(const sauna_config* config,
                                  const char* output_dir) {
  if (config == nullptr) return fail(SAUNA_ERR_INVALID_ARGUMENT, "config is NULL");
  return guarded([&] {
    sauna::ExperimentConfig cfg = config->cfg;
    if (output_dir != nullptr && *output_dir != '\0') {
      cfg.output_dir = output_dir;
    }
    const sauna::RunResult result = sauna::run_experiment(cfg);
    if (!result.all_ok()) {
      std::string detail = "seeds aborted:";
      for (const auto& s : result.seeds) {
        if (!s.ok) detail += " " + std::to_string(s.seed) + " (" + s.message + ")";
      }
      return fail(SAUNA_ERR_SEEDS_FAILED, detail);
    }
    return SAUNA_OK;
  });
}

sauna_status sauna_compare(const char* dir_a, const char* dir_b,
                           const char* out_path) {
  if (dir_a == nullptr || dir_b == nullptr) {
    return fail(SAUNA_ERR_INVALID_ARGUMENT, "run directory is NULL");
  }
  return guarded([&] {
    const auto rows = sauna::compare_runs(dir_a, dir_b);
    sauna::write_comparison(rows, out_path == nullptr ? "" : out_path);
    return SAUNA_OK;
  });
}

sauna_status sauna_export_metric(const char* const* run_dirs, size_t run_dir_count,
                                 const char* metric, const char* out_dir) {
  if (run_dirs == nullptr || run_dir_count == 0 || metric == nullptr ||
      out_dir == nullptr) {
    return fail(SAUNA_ERR_INVALID_ARGUMENT, "run_dirs/metric/out_dir is NULL");
  }
  return guarded([&] {
    std::vector<std::string> dirs;
    for (size_t i = 0; i < run_dir_count; ++i) {
      if (run_dirs[i] == nullptr) {
        throw std::invalid_argument("run directory " + std::to_string(i) + " is NULL");
      }
      dirs.emplace_back(run_dirs[i]);
    }
    sauna::export_plotdata(dirs, metric, out_dir);
    return SAUNA_OK;
  });
}

sauna_status sauna_run_suite(const char* suite_name, const char* out_dir,
                             const sauna_config* overrides) {
  if (suite_name == nullptr || out_dir == nullptr) {
    return fail(SAUNA_ERR_INVALID_ARGUMENT, "suite_name/out_dir is NULL");
  }
  if (std::string(suite_name) != "paper-suite") {
    return fail(SAUNA_ERR_INVALID_ARGUMENT,
                std::string("unknown suite '") + suite_name +
                    "' (available: paper-suite)");
  }
  return guarded([&] {
    sauna::ExperimentConfig base;
    if (overrides != nullptr) base = overrides->cfg;
    const auto results = sauna::run_suite_paper(base, out_dir);
    for (const auto& r : results) {
      if (!r.all_ok()) {
        return fail(SAUNA_ERR_SEEDS_FAILED, "some seeds aborted under " + r.output_dir);
      }
    }
    return SAUNA_OK;
  });
}

}  // extern "C"
